"""Algebraic gradient flow, its stabilization, and lexicographically minimal cycles."""

from __future__ import annotations

import heapq
from typing import Iterable, Optional, Sequence

from .complex import Chain, ElementwiseFiltration, inverse
from .reduction import AlgebraicGradient, ReductionResult, SparseColumnMatrix


class FlowContext:
    """An algebraic gradient together with the boundary operator in its basis.

    Parameters
    ----------
    boundary : columns ``{row: coeff}``; column k is the boundary of basis element k
    pairs : (facet, cofacet) basis positions
    p : field characteristic
    dims : degree of every basis element
    """

    def __init__(self, boundary: Sequence[dict], pairs: Iterable, p: int, dims: Sequence[int]):
        self.boundary = list(boundary)
        self.pairs = tuple(pairs)
        self.p = p
        self.dims = tuple(dims)
        self.cofacet = {}
        self.facet = {}
        for a, b in self.pairs:
            if a in self.cofacet or b in self.facet or a in self.facet or b in self.cofacet:
                raise ValueError(f"gradient pairs are not disjoint at ({a}, {b})")
            if not self.boundary[b].get(a):
                raise ValueError(f"({a}, {b}) is not a facet pair")
            self.cofacet[a] = b
            self.facet[b] = a

    def __len__(self):
        return len(self.boundary)

    def __repr__(self):
        return f"FlowContext(n={len(self)}, pairs={len(self.pairs)}, p={self.p})"

    @classmethod
    def from_gradient(cls, gradient: AlgebraicGradient, D: SparseColumnMatrix) -> "FlowContext":
        return cls(gradient.boundary(D), gradient.pairs, gradient.p, D.dims)

    @classmethod
    def from_filtration(cls, filtration: ElementwiseFiltration, pairs: Iterable, p: int = 2) -> "FlowContext":
        """Flow on the simplex basis; ``pairs`` are simplex pairs or position pairs."""
        idx = filtration.index
        pos = [(idx[a], idx[b]) if isinstance(a, tuple) else (a, b) for a, b in pairs]
        bd = [filtration.boundary_column(j, p) for j in range(len(filtration))]
        return cls(bd, pos, p, filtration.dims)

    def is_reduced(self, n: Optional[int] = None) -> bool:
        """pivot(boundary of b) == a for every pair (a, b), restricted to facets of degree n."""
        for a, b in self.pairs:
            if n is not None and self.dims[a] != n:
                continue
            col = self.boundary[b]
            if max(col) != a:
                return False
        return True

    def generates_boundaries(self, n: int) -> bool:
        """Whether the gradient cofacet boundaries span all n-boundaries."""
        cof = [self.boundary[b] for a, b in self.pairs if self.dims[a] == n]
        everything = [self.boundary[k] for k in range(len(self)) if self.dims[k] == n + 1]
        return _rank(cof, self.p) == _rank(everything, self.p)

    def chain(self, entries, degree: Optional[int] = None) -> Chain:
        c = Chain(entries, p=self.p)
        c.degree = degree if degree is not None else (self.dims[next(iter(c))] if c else 0)
        return c

    def d(self, c: Chain) -> Chain:
        """Boundary of a chain in this basis."""
        return Chain._trusted(_combine(((self.boundary[k], v) for k, v in c.items()), self.p), c.degree - 1, self.p)


def _combine(terms, p: int) -> dict:
    out: dict = {}
    for col, scale in terms:
        for k, v in col.items():
            w = (out.get(k, 0) + scale * v) % p
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def _rank(columns: list, p: int) -> int:
    owner: dict = {}
    rank = 0
    for col in columns:
        col = dict(col)
        while col:
            piv = max(col)
            other = owner.get(piv)
            if other is None:
                owner[piv] = col
                rank += 1
                break
            mu = -col[piv] * inverse(other[piv], p) % p
            col = _combine([(col, 1), (other, mu)], p)
    return rank


def apply_F(ctx: FlowContext, c: Chain) -> Chain:
    """Send each gradient facet a to -b / <boundary b, a>; everything else to 0."""
    p = ctx.p
    out = {}
    for a, v in c.items():
        b = ctx.cofacet.get(a)
        if b is not None:
            out[b] = (out.get(b, 0) - v * inverse(ctx.boundary[b][a], p)) % p
    return Chain({k: w for k, w in out.items() if w}, degree=c.degree + 1, p=p)


def flow_once(ctx: FlowContext, c: Chain) -> Chain:
    """c + d(F c) + F(d c)."""
    return c + ctx.d(apply_F(ctx, c)) + apply_F(ctx, ctx.d(c))


def stabilized_flow(ctx: FlowContext, c: Chain, max_iter: Optional[int] = None) -> Chain:
    """Iterate the flow until the chain is fixed."""
    limit = max_iter if max_iter is not None else max(1, len(ctx)) ** 2
    for _ in range(limit + 1):
        nxt = flow_once(ctx, c)
        if nxt == c:
            return c
        c = nxt
    raise RuntimeError(f"flow did not stabilize within {limit} steps; the gradient is broken")


def _require_cycle(ctx: FlowContext, c: Chain):
    if ctx.d(c):
        raise ValueError("input chain is not a cycle")


def gradient_flow_reduction(ctx: FlowContext, c: Chain) -> Chain:
    """One ascending elimination pass over the gradient facets of a cycle."""
    _require_cycle(ctx, c)
    if not ctx.is_reduced(c.degree):
        raise ValueError(f"gradient is not reduced in degree {c.degree}")
    p = ctx.p
    z = c.to_dict()
    for i in sorted(z):
        zi = z.get(i)
        j = ctx.cofacet.get(i)
        if not zi or j is None:
            continue
        col = ctx.boundary[j]
        mu = -zi * inverse(col[i], p) % p
        z = _combine([(z, 1), (col, mu)], p)
    return Chain._trusted(z, c.degree, p)


def stabilized_flow_reduction(ctx: FlowContext, c: Chain, order: str = "max") -> Chain:
    """Eliminate gradient facets of a cycle until none is left.

    ``order`` picks which gradient facet goes next: the latest ("max") or the
    earliest ("min") one.
    """
    _require_cycle(ctx, c)
    p = ctx.p
    z = c.to_dict()
    limit = max(1, len(ctx)) ** 2
    for _ in range(limit):
        facets = [i for i in z if i in ctx.cofacet]
        if not facets:
            return Chain._trusted({k: z[k] for k in sorted(z)}, c.degree, p)
        i = max(facets) if order == "max" else min(facets)
        col = ctx.boundary[ctx.cofacet[i]]
        mu = -z[i] * inverse(col[i], p) % p
        z = _combine([(z, 1), (col, mu)], p)
    raise RuntimeError("stabilized flow reduction did not terminate")


def gradient_facets(ctx: FlowContext, c: Chain) -> list:
    return sorted(i for i in c if i in ctx.cofacet)


def n_reduction_context(res: ReductionResult, n: int, upto: Optional[int] = None) -> FlowContext:
    """Gradient (pivot R_j, S_j) over deaths j of degree n+1 below ``upto``.

    In degrees n and below this basis agrees with the simplex basis, and the
    boundary of S_j is the column R_j.
    """
    m = len(res.D) if upto is None else upto
    dims = res.D.dims
    boundary = [dict(res.D[k]) for k in range(len(res.D))]
    pairs = []
    for i, j in res.index_pairs:
        if j < m and dims[j] == n + 1:
            boundary[j] = dict(res.R[j])
            pairs.append((i, j))
    return FlowContext(boundary, pairs, res.p, dims)


def lex_minimal_cycle(z: Chain, res: ReductionResult, upto: Optional[int] = None, method: str = "descending") -> Chain:
    """The lexicographically minimal cycle homologous to ``z``.

    ``upto`` restricts the complex to the first ``upto`` simplices of the
    filtration (a sublevel set); ``z`` must live there. Births whose death
    lies inside the prefix are eliminated with the reduced columns, latest
    first, so every step only introduces earlier simplices.

    ``method="elimination"`` instead runs the stabilized flow reduction for the
    degree-n reduction gradient, earliest facet first (for cross-checks).
    """
    m = len(res.D) if upto is None else upto
    p = res.p
    if z and max(z) >= m:
        raise ValueError("cycle is not supported on the requested sublevel set")
    if res.D.apply(z.to_dict()):
        raise ValueError("input chain is not a cycle")
    if method == "elimination":
        ctx = n_reduction_context(res, z.degree, m)
        return stabilized_flow_reduction(ctx, z, order="min")
    if method != "descending":
        raise ValueError(f"unknown method {method!r}")
    col = z.to_dict()
    heap = [-k for k in col]
    heapq.heapify(heap)
    R = res.R
    while heap:
        i = -heapq.heappop(heap)
        zi = col.get(i)
        if not zi:
            continue
        j = res.death_of.get(i)
        if j is None or j >= m:
            continue
        Rj = R[j]
        mu = -zi * inverse(Rj[i], p) % p
        for k, v in Rj.items():
            w = col.get(k)
            if w is None:
                col[k] = mu * v % p
                heapq.heappush(heap, -k)
            else:
                w = (w + mu * v) % p
                if w:
                    col[k] = w
                else:
                    del col[k]
    return Chain._trusted({k: col[k] for k in sorted(col)}, z.degree, p)
