"""Surfaces module - rough-surface catalog, normals and boundary quadrature nodes."""
