"""Plain-text rendering of run reports."""
