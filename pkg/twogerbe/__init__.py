"""Finite bundle 2-gerbes, their per-point bigroupoids and Čech 3-cocycles."""
