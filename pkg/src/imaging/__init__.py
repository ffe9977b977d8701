"""Imaging module - direct imaging indicator, grid sweep and profile extraction."""
