"""Tests for quiver-semi-invariants."""
