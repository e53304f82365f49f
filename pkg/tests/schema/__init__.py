"""Tests for BRepDocument parsing, validation and persistence."""
