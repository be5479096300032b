"""Descent of circle bundles and gluing of 2-descent data."""
