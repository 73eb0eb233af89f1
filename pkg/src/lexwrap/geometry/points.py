"""Point clouds with exact rational coordinates."""

from __future__ import annotations

import hashlib
import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GeneralPositionError(ValueError):
    """Input violates general position; ``subset`` lists the offending point ids."""

    def __init__(self, message: str, subset: Sequence[int] = ()):
        self.subset = tuple(subset)
        super().__init__(f"{message} (points {list(self.subset)})" if subset else message)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite coordinate {x}")
    return Fraction(x)


PERTURBATION_EXPONENT = -40


def _hash_unit(i: int, k: int) -> Fraction:
    """Deterministic value in [-1, 1) derived from (point id, axis)."""
    h = int.from_bytes(hashlib.sha256(f"{i}:{k}".encode()).digest()[:8], "big")
    return Fraction(h, 1 << 63) - 1


class PointCloud:
    """Finite point set in R^2 or R^3 with exact rational coordinates.

    Vertex ids are the row positions. Duplicates are rejected. With
    ``perturb=True`` every coordinate is shifted by a hash-derived amount of
    at most 2^-40 times the bounding-box diagonal, which is recorded in
    ``perturbation``.
    """

    def __init__(self, points: Iterable[Iterable], perturb: bool = False, dims=(2, 3)):
        coords = [tuple(to_fraction(x) for x in p) for p in points]
        if not coords:
            raise ValueError("empty point cloud")
        d = len(coords[0])
        if any(len(c) != d for c in coords):
            raise ValueError("all points must have the same dimension")
        if d not in dims:
            raise ValueError(f"points must live in R^2 or R^3, got dimension {d}")
        seen: dict = {}
        for i, c in enumerate(coords):
            if c in seen:
                raise ValueError(f"duplicate point: rows {seen[c]} and {i} are both {tuple(map(float, c))}")
            seen[c] = i
        self.perturbation = Fraction(0)
        if perturb:
            lo = [min(c[k] for c in coords) for k in range(d)]
            hi = [max(c[k] for c in coords) for k in range(d)]
            diag = Fraction(math.sqrt(float(sum((h - l) ** 2 for h, l in zip(hi, lo))))) or Fraction(1)
            scale = diag * Fraction(2) ** PERTURBATION_EXPONENT
            coords = [tuple(x + scale * _hash_unit(i, k) for k, x in enumerate(c)) for i, c in enumerate(coords)]
            self.perturbation = scale
        self.coords: tuple = tuple(coords)
        self.dim = d

    @classmethod
    def from_array(cls, array, perturb: bool = False) -> "PointCloud":
        return cls(np.asarray(array, dtype=float).tolist(), perturb=perturb)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return f"PointCloud(n={len(self)}, dim={self.dim})"

    @property
    def perturbed(self) -> bool:
        return self.perturbation != 0

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in c] for c in self.coords])

    @cached_property
    def scale(self) -> int:
        """Common denominator turning every coordinate into an integer."""
        m = 1
        for c in self.coords:
            for x in c:
                m = math.lcm(m, x.denominator)
        return m

    @cached_property
    def int_coords(self) -> tuple:
        s = self.scale
        return tuple(tuple(int(x * s) for x in c) for c in self.coords)
