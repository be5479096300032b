"""Finite bundle gerbes, their morphisms and transformations."""
