"""Tests for mhsolve."""
