"""Utility modules for the power model."""
