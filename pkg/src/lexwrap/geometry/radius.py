"""Delaunay and Čech radius functions, as exact squared radii."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional

from ..complex import SimplicialComplex
from .balls import int_circumsphere, min_enclosing_ball
from .delaunay import DelaunayComplex, delaunay_complex
from .points import PointCloud
from .predicates import insphere


def _strictly_inside(num, den, r2, q) -> int:
    """Compare |q - num/den|^2 with r2; returns -1 inside, 0 on, 1 outside."""
    d2 = sum((den * x - c) ** 2 for x, c in zip(q, num))
    lhs = Fraction(d2, den * den)
    return (lhs > r2) - (lhs < r2)


def _check_is_delaunay_of(K: SimplicialComplex, X: PointCloud):
    if isinstance(K, DelaunayComplex) and K.points is X:
        return
    if K.vertices != list(range(len(X))):
        raise ValueError("complex vertices do not match the point cloud")
    tops = [s for s in K if len(s) - 1 == K.dimension]
    P = X.int_coords
    if K.dimension == X.dim:
        for s in tops:
            for f in K.facets(s):
                for t in K.cofacets(f):
                    if t == s:
                        continue
                    (q,) = set(t) - set(s)
                    if insphere([P[v] for v in s], P[q]) >= 0:
                        raise ValueError(f"{s} is not a Delaunay simplex: its circumsphere contains point {q}")
    if K != delaunay_complex(X):
        raise ValueError("complex is not the Delaunay complex of the point cloud")


def delaunay_radius_values(K: SimplicialComplex, X: PointCloud) -> dict:
    """Squared radius of the smallest empty circumsphere of every simplex.

    Top-down: a simplex whose smallest circumscribing ball (closed) contains
    no cofacet's opposite vertex (a Gabriel simplex) gets that ball's squared
    radius; otherwise it inherits the minimum over its cofacets. A vertex on
    the sphere itself yields the same value either way.
    """
    _check_is_delaunay_of(K, X)
    P = X.int_coords
    unit = Fraction(1, X.scale * X.scale)
    values: dict = {}
    for s in sorted(K, key=lambda s: -len(s)):
        if len(s) == 1:
            values[s] = Fraction(0)
            continue
        cof = K.cofacets(s)
        num, den, r2 = int_circumsphere([P[v] for v in s])
        attached = False
        for t in cof:
            (q,) = set(t) - set(s)
            if _strictly_inside(num, den, r2, P[q]) <= 0:
                attached = True
                break
        values[s] = min(values[t] for t in cof) if attached else r2 * unit
    return values


def cech_radius_values(K: SimplicialComplex, X: PointCloud) -> dict:
    """Squared radius of the minimum enclosing ball of every simplex."""
    values = {}
    for s in K:
        if len(s) == 1:
            values[s] = Fraction(0)
        else:
            values[s] = min_enclosing_ball([X[v] for v in s]).radius2
    return values


def cech_complex(X: PointCloud, max_dim: int = 3, max_radius2: Optional[Fraction] = None) -> SimplicialComplex:
    """Čech complex capped at ``max_dim`` and squared radius ``max_radius2``
    (default: squared radius of the enclosing ball of X)."""
    if max_radius2 is None:
        max_radius2 = min_enclosing_ball(X.coords).radius2
    n = len(X)
    simplices = []
    for k in range(1, min(max_dim + 1, n) + 1):
        for s in combinations(range(n), k):
            if k == 1 or min_enclosing_ball([X[v] for v in s]).radius2 <= max_radius2:
                simplices.append(s)
    return SimplicialComplex(simplices)
