"""Tests for the synthetic solid generators and the corpus builder."""
