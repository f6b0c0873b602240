"""Configuration: YAML settings and the parameter registry."""
