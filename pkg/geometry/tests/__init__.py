"""Tests for geometry app."""
