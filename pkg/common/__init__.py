"""Shared settings, errors, angle arithmetic and Celery plumbing for gerbe-lab."""

__version__ = "0.3.0"
