"""Tests for the adjacency graph, breadth-first traversal and reference windows."""
