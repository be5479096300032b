"""Batch front-end: ``python -m cli.main <command> ...``."""
