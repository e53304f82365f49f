"""Tests for the FSQ quantizer and the reference latent encoder."""
