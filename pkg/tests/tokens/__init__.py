"""Tests for the token vocabulary, stream containers, codec and autocomplete."""
