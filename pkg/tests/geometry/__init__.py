"""Tests for point grids, boxes, canonicalization and augmentation."""
