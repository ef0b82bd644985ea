"""Tests for capacity_lab project package."""
