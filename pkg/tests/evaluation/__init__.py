"""Tests for validity checks, constraint detection and generation metrics."""
