"""Incremental Delaunay triangulation in R^2 and R^3 with exact predicates.

Bowyer-Watson insertion on a triangulation closed off by a symbolic vertex at
infinity: every hull facet carries an infinite cell, so points outside the
current hull are handled like interior ones. Locating uses a visibility walk
from the most recently created cell.
"""

from __future__ import annotations

import random
from typing import Optional

from ..complex import SimplicialComplex
from .points import GeneralPositionError, PointCloud
from .predicates import det, orientation

INF = -1


def _affinely_independent(pts) -> bool:
    if len(pts) <= 1:
        return True
    p0 = pts[0]
    us = [[x - y for x, y in zip(p, p0)] for p in pts[1:]]
    gram = [[sum(a * b for a, b in zip(u, v)) for v in us] for u in us]
    return det(gram) != 0


class _Triangulation:
    def __init__(self, pts: tuple, dim: int):
        self.P = pts
        self.d = dim
        self.cells: list = []
        self.neigh: list = []
        self.alive: list = []
        self.last = 0
        self._rng = random.Random(12345)

    # predicates ---------------------------------------------------------
    def _orient(self, verts, q=None) -> int:
        """Orientation of a cell; INF is replaced by ``q`` (default: interior reference)."""
        if INF not in verts:
            return orientation([self.P[v] for v in verts])
        if q is None:
            m = self.d + 1
            pts = [self.ref if v == INF else tuple(m * x for x in self.P[v]) for v in verts]
        else:
            pts = [q if v == INF else self.P[v] for v in verts]
        return orientation(pts)

    def _in_conflict(self, c: int, p: int) -> bool:
        verts = self.cells[c]
        q = self.P[p]
        if INF in verts:
            o = self._orient(verts, q)
            if o == 0:
                raise GeneralPositionError(
                    "point lies on the affine hull of a convex-hull facet", sorted(v for v in verts if v != INF) + [p]
                )
            return o < 0
        rows = []
        for v in verts:
            u = [x - y for x, y in zip(self.P[v], q)]
            u.append(sum(x * x for x in u))
            rows.append(u)
        s = det(rows) * (-1) ** self.d
        if s == 0:
            raise GeneralPositionError("cospherical points", sorted(verts) + [p])
        return s > 0

    # construction ---------------------------------------------------------
    def _new_cell(self, verts: list, neigh: list) -> int:
        self.cells.append(verts)
        self.neigh.append(neigh)
        self.alive.append(True)
        return len(self.cells) - 1

    def init_simplex(self, base: list):
        d = self.d
        self.ref = tuple(sum(self.P[v][k] for v in base) for k in range(d))
        if orientation([self.P[v] for v in base]) < 0:
            base[0], base[1] = base[1], base[0]
        c0 = self._new_cell(list(base), [None] * (d + 1))
        for i in range(d + 1):
            verts = list(base)
            verts[i] = INF
            nb = [None] * (d + 1)
            nb[i] = c0
            ci = self._new_cell(verts, nb)
            self.neigh[c0][i] = ci
            if self._orient(verts) < 0:
                self._swap(ci, i)
        self._link([c for c in range(1, d + 2)], INF)
        self.last = c0

    def _swap(self, c: int, avoid: int):
        a, b = [k for k in range(self.d + 1) if k != avoid][:2]
        v, n = self.cells[c], self.neigh[c]
        v[a], v[b] = v[b], v[a]
        n[a], n[b] = n[b], n[a]

    def _link(self, new_cells: list, apex: int):
        """Connect new cells across their facets that contain ``apex``."""
        table: dict = {}
        for c in new_cells:
            verts = self.cells[c]
            for j, v in enumerate(verts):
                if v == apex:
                    continue
                key = frozenset(verts[:j] + verts[j + 1 :])
                other = table.pop(key, None)
                if other is None:
                    table[key] = (c, j)
                else:
                    oc, oj = other
                    self.neigh[c][j] = oc
                    self.neigh[oc][oj] = c
        if table:
            raise RuntimeError("triangulation cavity is not closed")

    def locate(self, p: int) -> int:
        """A cell in conflict with point ``p``."""
        q = self.P[p]
        c = self.last
        if not self.alive[c]:
            c = next(i for i in range(len(self.cells) - 1, -1, -1) if self.alive[i] and INF not in self.cells[i])
        if INF in self.cells[c]:
            c = self.neigh[c][self.cells[c].index(INF)]
        d1 = self.d + 1
        for _ in range(4 * len(self.cells) + 10):
            verts = self.cells[c]
            start = self._rng.randrange(d1)
            moved = False
            for t in range(d1):
                i = (start + t) % d1
                trial = list(verts)
                trial[i] = INF
                if self._orient(trial, q) < 0:
                    nb = self.neigh[c][i]
                    if INF in self.cells[nb]:
                        return nb
                    c = nb
                    moved = True
                    break
            if not moved:
                return c
        for i, verts in enumerate(self.cells):  # walk failed to terminate; fall back to a scan
            if self.alive[i] and self._in_conflict(i, p):
                return i
        raise RuntimeError("no conflicting cell found")

    def insert(self, p: int):
        start = self.locate(p)
        status = {start: True}
        stack = [start]
        boundary = []
        while stack:
            c = stack.pop()
            for i, nb in enumerate(self.neigh[c]):
                st = status.get(nb)
                if st is None:
                    st = self._in_conflict(nb, p)
                    status[nb] = st
                    if st:
                        stack.append(nb)
                if not st:
                    boundary.append((c, i))
        new_cells = []
        for c, i in boundary:
            verts = list(self.cells[c])
            verts[i] = p
            outer = self.neigh[c][i]
            nb = [None] * (self.d + 1)
            nb[i] = outer
            nc = self._new_cell(verts, nb)
            self.neigh[outer][self.neigh[outer].index(c)] = nc
            o = self._orient(verts)
            if o == 0:
                raise GeneralPositionError("affinely dependent points", sorted(v for v in verts if v != INF))
            if o < 0:
                self._swap(nc, i)
            new_cells.append(nc)
        for c, st in status.items():
            if st:
                self.alive[c] = False
        self._link(new_cells, p)
        self.last = next((c for c in new_cells if INF not in self.cells[c]), new_cells[0])

    def finite_cells(self) -> list:
        return sorted(
            tuple(sorted(v)) for c, v in enumerate(self.cells) if self.alive[c] and INF not in v
        )


def delaunay_cells(X: PointCloud, seed: int = 0) -> list:
    """Top-dimensional Delaunay simplices of ``X`` as sorted vertex tuples."""
    P = X.int_coords
    n, d = len(P), X.dim
    if n <= d:
        if not _affinely_independent(P):
            raise GeneralPositionError("affinely dependent points", range(n))
        return [tuple(range(n))]
    order = list(range(n))
    random.Random(seed).shuffle(order)
    base: list = []
    for v in order:
        if _affinely_independent([P[u] for u in base + [v]]):
            base.append(v)
            if len(base) == d + 1:
                break
    if len(base) < d + 1:
        raise GeneralPositionError("all points lie in a common hyperplane", base)
    tri = _Triangulation(P, d)
    tri.init_simplex(list(base))
    chosen = set(base)
    for v in order:
        if v not in chosen:
            tri.insert(v)
    return tri.finite_cells()


class DelaunayComplex(SimplicialComplex):
    """Delaunay complex of a point cloud; ``cells`` are its top simplices."""

    def __init__(self, points: PointCloud, cells: list):
        super().__init__(cells)
        self.points = points
        self.cells = tuple(cells)


def delaunay_complex(X: PointCloud) -> DelaunayComplex:
    """Delaunay triangulation of ``X`` as a simplicial complex.

    Raises :class:`GeneralPositionError` if an exact predicate detects a
    degeneracy (cospherical points, points on a hull hyperplane).
    """
    return DelaunayComplex(X, delaunay_cells(X))


def check_delaunay(X: PointCloud, cells) -> Optional[tuple]:
    """Brute-force empty-circumsphere check; returns a violating (cell, point) or None."""
    from .predicates import insphere

    P = X.int_coords
    for cell in cells:
        pts = [P[v] for v in cell]
        for q in range(len(P)):
            if q not in cell and insphere(pts, P[q]) >= 0:
                return cell, q
    return None
