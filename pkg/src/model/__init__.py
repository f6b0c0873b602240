"""Analytical power model: geometry, energy, event mapping and estimation."""
