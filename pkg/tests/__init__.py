"""Rough Surface Imaging test suite."""
