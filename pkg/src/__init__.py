"""Rough Surface Imaging - scattering simulation and direct imaging of rough surfaces."""

__version__ = "0.1.0"
