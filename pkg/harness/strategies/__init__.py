"""Scenario check strategies."""
