"""Circumspheres and minimum enclosing balls in exact arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .points import to_fraction
from .predicates import det


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius2: Fraction

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius2)

    def distance2(self, point) -> Fraction:
        return sum((to_fraction(x) - c) ** 2 for x, c in zip(point, self.center))

    def contains(self, point, strict: bool = False) -> bool:
        d2 = self.distance2(point)
        return d2 < self.radius2 if strict else d2 <= self.radius2


def int_circumsphere(pts: Sequence[Sequence[int]]):
    """Smallest circumsphere of affinely independent integer points.

    Returns ``(num, den, r2)``: the center is ``num / den`` coordinatewise
    (integers) and ``r2`` is the exact squared radius. Raises ValueError on
    affine dependence.
    """
    p0 = pts[0]
    if len(pts) == 1:
        return tuple(p0), 1, Fraction(0)
    us = [[x - y for x, y in zip(p, p0)] for p in pts[1:]]
    k = len(us)
    gram = [[sum(a * b for a, b in zip(us[i], us[j])) for j in range(k)] for i in range(k)]
    b = [gram[i][i] for i in range(k)]
    g = det(gram)
    if g == 0:
        raise ValueError("points are affinely dependent")
    # Cramer: 2 G lam = b  =>  lam_i = det(G_i) / (2 det G)
    cram = []
    for i in range(k):
        gi = [row[:i] + [b[r]] + row[i + 1 :] for r, row in enumerate(gram)]
        cram.append(det(gi))
    den = 2 * g
    num = tuple(den * p0[a] + sum(cram[i] * us[i][a] for i in range(k)) for a in range(len(p0)))
    r2 = Fraction(sum(c * bi for c, bi in zip(cram, b)), 4 * g)
    if den < 0:
        num, den = tuple(-x for x in num), -den
    return num, den, r2


def _scaled(points):
    fr = [tuple(to_fraction(x) for x in p) for p in points]
    m = 1
    for p in fr:
        for x in p:
            m = math.lcm(m, x.denominator)
    return fr, m, [tuple(int(x * m) for x in p) for p in fr]


def circumsphere(points: Sequence[Sequence]) -> Ball:
    """Smallest sphere through all points, within their affine hull."""
    if len(points) == 0:
        raise ValueError("circumsphere of an empty point set")
    _, m, ints = _scaled(points)
    num, den, r2 = int_circumsphere(ints)
    center = tuple(Fraction(x, den * m) for x in num)
    return Ball(center, r2 / (m * m))


def min_enclosing_ball(points: Sequence[Sequence]) -> Ball:
    """Smallest closed ball containing ``points`` (Welzl's recursion, exact)."""
    pts = [tuple(to_fraction(x) for x in p) for p in points]
    if not pts:
        raise ValueError("min_enclosing_ball of an empty point set")
    dim = len(pts[0])

    def welzl(n: int, boundary: list) -> Ball:
        if n == 0 or len(boundary) == dim + 1:
            if not boundary:
                return None
            return circumsphere(boundary)
        p = pts[n - 1]
        ball = welzl(n - 1, boundary)
        if ball is not None and ball.contains(p):
            return ball
        return welzl(n - 1, boundary + [p])

    return welzl(len(pts), [])
