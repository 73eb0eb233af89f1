"""Point-cloud geometry: Delaunay complexes, balls and radius functions."""

from .balls import Ball, circumsphere, min_enclosing_ball
from .delaunay import DelaunayComplex, delaunay_complex
from .points import GeneralPositionError, PointCloud
from .radius import cech_complex, cech_radius_values, delaunay_radius_values

__all__ = [
    "Ball",
    "DelaunayComplex",
    "GeneralPositionError",
    "PointCloud",
    "cech_complex",
    "cech_radius_values",
    "circumsphere",
    "delaunay_complex",
    "delaunay_radius_values",
    "min_enclosing_ball",
]
