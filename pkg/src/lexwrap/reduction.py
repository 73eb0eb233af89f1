"""Filtration boundary matrices, standard/exhaustive reduction and the
algebraic gradients derived from a reduction."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from .complex import Chain, ElementwiseFiltration, check_field, inverse


class SparseColumnMatrix:
    """Square matrix over Z/p stored as columns ``{row: coeff}`` sorted by row.

    Because columns keep ascending row order, the pivot is the last key.
    """

    def __init__(self, columns: Sequence[dict], p: int = 2, dims: Optional[Sequence[int]] = None):
        self.p = check_field(p)
        self.columns = [self._normalize(c) for c in columns]
        self.dims = tuple(dims) if dims is not None else None
        n = len(self.columns)
        for j, col in enumerate(self.columns):
            if col and (next(iter(col)) < 0 or next(reversed(col)) >= n):
                raise ValueError(f"column {j} has a row index outside [0, {n})")

    def _normalize(self, col) -> dict:
        p = self.p
        return {i: v % p for i, v in sorted(col.items()) if v % p}

    def __len__(self) -> int:
        return len(self.columns)

    def __getitem__(self, j: int) -> dict:
        return self.columns[j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseColumnMatrix):
            return NotImplemented
        return self.p == other.p and self.columns == other.columns

    def __repr__(self):
        return f"SparseColumnMatrix(n={len(self)}, nnz={self.nnz}, p={self.p})"

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def pivot(self, j: int) -> Optional[int]:
        col = self.columns[j]
        return next(reversed(col)) if col else None

    def entry(self, i: int, j: int) -> int:
        return self.columns[j].get(i, 0)

    def column_chain(self, j: int) -> Chain:
        degree = self.dims[j] - 1 if self.dims is not None else 0
        return Chain._trusted(dict(self.columns[j]), degree, self.p)

    def apply(self, vec: dict) -> dict:
        """Matrix-vector product with a sparse vector."""
        p = self.p
        out: dict = {}
        for j, a in vec.items():
            for i, b in self.columns[j].items():
                out[i] = (out.get(i, 0) + a * b) % p
        return {i: v for i, v in sorted(out.items()) if v}

    def __matmul__(self, other: "SparseColumnMatrix") -> "SparseColumnMatrix":
        return SparseColumnMatrix([self.apply(c) for c in other.columns], self.p, other.dims)

    def to_dense(self):
        import numpy as np

        n = len(self)
        M = np.zeros((n, n), dtype=np.int64)
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                M[i, j] = v
        return M

    @classmethod
    def identity(cls, n: int, p: int = 2, dims=None) -> "SparseColumnMatrix":
        return cls([{j: 1} for j in range(n)], p, dims)


def filtration_boundary_matrix(filtration: ElementwiseFiltration, p: int = 2) -> SparseColumnMatrix:
    """Boundary operator in filtration coordinates (column j = boundary of the j-th simplex)."""
    check_field(p)
    return SparseColumnMatrix([filtration.boundary_column(j, p) for j in range(len(filtration))], p, filtration.dims)


def matrix_apparent_pairs(D: SparseColumnMatrix) -> list:
    """Apparent pairs read off the boundary matrix: (i, j) with i = pivot of
    column j and j the first column with a non-zero in row i."""
    first: dict = {}
    for j, col in enumerate(D.columns):
        for i in col:
            first.setdefault(i, j)
    out = []
    for j in range(len(D)):
        i = D.pivot(j)
        if i is not None and first[i] == j:
            out.append((i, j))
    return out


@dataclass
class ReductionResult:
    """Outcome of a reduction R = D S."""

    D: SparseColumnMatrix
    R: SparseColumnMatrix
    S: SparseColumnMatrix
    index_pairs: list
    essential: list
    exhaustive: bool = False
    birth_of: dict = field(default_factory=dict)
    death_of: dict = field(default_factory=dict)

    def __post_init__(self):
        self.birth_of = {j: i for i, j in self.index_pairs}
        self.death_of = {i: j for i, j in self.index_pairs}

    def __repr__(self):
        return (
            f"ReductionResult(n={len(self.D)}, pairs={len(self.index_pairs)}, "
            f"essential={len(self.essential)}, exhaustive={self.exhaustive})"
        )

    @property
    def p(self) -> int:
        return self.D.p

    def kind(self, i: int) -> str:
        if i in self.birth_of:
            return "death"
        if i in self.death_of:
            return "birth"
        return "essential"

    def verify(self) -> bool:
        """R == D S exactly."""
        return (self.D @ self.S) == self.R

    @cached_property
    def flags(self) -> dict:
        return compatibility_checks(self)

    @property
    def is_totally_reduced(self) -> bool:
        return self.flags["totally_reduced"]

    @property
    def is_death_compatible(self) -> bool:
        return self.flags["death_compatible"]

    @property
    def is_apparent_pairs_compatible(self) -> bool:
        return self.flags["apparent_pairs_compatible"]


def _reduce(D: SparseColumnMatrix, exhaustive: bool, apparent_shortcut: bool) -> ReductionResult:
    p = D.p
    n = len(D)
    R_cols: list = [None] * n
    S_cols: list = [None] * n
    owner: dict = {}
    # an apparent-pair column still needs its lower rows cleared in exhaustive mode
    skip = {j for _, j in matrix_apparent_pairs(D)} if apparent_shortcut and not exhaustive else ()
    for j in range(n):
        col = dict(D.columns[j])
        s = {j: 1}
        if j not in skip and col:
            heap = [-r for r in col]
            heapq.heapify(heap)
            kept: set = set()
            while heap:
                r = -heap[0]
                if r not in col or r in kept:
                    heapq.heappop(heap)
                    continue
                i = owner.get(r)
                if i is None:
                    if not exhaustive:
                        break
                    heapq.heappop(heap)
                    kept.add(r)
                    continue
                Ri = R_cols[i]
                mu = (-col[r] * inverse(Ri[r], p)) % p
                for k, v in Ri.items():
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
                for k, v in S_cols[i].items():
                    w = (s.get(k, 0) + mu * v) % p
                    if w:
                        s[k] = w
                    else:
                        s.pop(k, None)
        R_cols[j] = {k: col[k] for k in sorted(col)}
        S_cols[j] = {k: s[k] for k in sorted(s)}
        if col:
            owner[next(reversed(R_cols[j]))] = j
    R = SparseColumnMatrix.__new__(SparseColumnMatrix)
    R.p, R.columns, R.dims = p, R_cols, D.dims
    S = SparseColumnMatrix.__new__(SparseColumnMatrix)
    S.p, S.columns, S.dims = p, S_cols, D.dims
    pairs = sorted((i, j) for i, j in owner.items())
    pairs.sort(key=lambda ij: ij[1])
    births = set(owner)
    essential = [i for i in range(n) if not R_cols[i] and i not in births]
    return ReductionResult(D, R, S, pairs, essential, exhaustive)


def standard_reduce(D: SparseColumnMatrix, apparent_shortcut: bool = False) -> ReductionResult:
    """Left-to-right pivot-collision elimination.

    With ``apparent_shortcut`` the columns of apparent-pair deaths are taken
    as already reduced.
    """
    return _reduce(D, exhaustive=False, apparent_shortcut=apparent_shortcut)


def exhaustive_reduce(D: SparseColumnMatrix, apparent_shortcut: bool = False) -> ReductionResult:
    """Reduction that also clears every row that is the pivot of an earlier
    column (rows scanned in decreasing order), giving a totally reduced R.

    ``apparent_shortcut`` is accepted for symmetry but has no effect here.
    """
    return _reduce(D, exhaustive=True, apparent_shortcut=apparent_shortcut)


def compatibility_checks(res: ReductionResult) -> dict:
    R, S = res.R, res.S
    n = len(R)
    owner = {}
    reduced = True
    totally = True
    for j in range(n):
        piv = R.pivot(j)
        if piv is not None:
            if piv in owner:
                reduced = False
            owner.setdefault(piv, j)
    for j in range(n):
        for s in R[j]:
            i = owner.get(s)
            if i is not None and i < j:
                totally = False
                break
        if not totally:
            break
    deaths = set(res.birth_of)
    death_compatible = all(i in deaths for j in deaths for i in S[j])
    apparent = all(S[j] == {j: 1} for _, j in matrix_apparent_pairs(res.D))
    dims = res.D.dims
    homogeneous = dims is None or all(dims[i] == dims[j] for j in range(n) for i in S[j])
    upper = all(S.pivot(j) == j and S[j][j] == 1 for j in range(n))
    return {
        "reduced": reduced,
        "totally_reduced": totally,
        "death_compatible": death_compatible,
        "apparent_pairs_compatible": apparent,
        "homogeneous": homogeneous,
        "unit_upper_triangular": upper,
    }


@dataclass
class Bar:
    dim: int
    birth: object
    death: object  # None for an essential class
    birth_index: int
    death_index: Optional[int]
    birth_simplex: tuple
    death_simplex: Optional[tuple]

    @property
    def zero_persistence(self) -> bool:
        return self.death is not None and self.death == self.birth

    @property
    def finite(self) -> bool:
        return self.death is not None


def persistence_pairs_and_barcode(res: ReductionResult, filtration: ElementwiseFiltration, values=None) -> list:
    """Intervals [f(birth), f(death)) per pair and [f(birth), inf) per essential index,
    ordered by birth index. Zero-length bars are kept and flagged."""
    vals = filtration.values if values is None else values
    S = filtration.simplices
    bars = [
        Bar(filtration.dims[i], vals[i], vals[j], i, j, S[i], S[j]) for i, j in res.index_pairs
    ]
    bars += [Bar(filtration.dims[i], vals[i], None, i, None, S[i], None) for i in res.essential]
    bars.sort(key=lambda b: b.birth_index)
    return bars


def express_in_basis(vec: dict, basis: Sequence[dict], p: int) -> dict:
    """Coordinates of ``vec`` in a triangular basis whose i-th element has pivot i."""
    v = dict(vec)
    heap = [-k for k in v]
    heapq.heapify(heap)
    out = {}
    while heap:
        i = -heapq.heappop(heap)
        c = v.pop(i, 0)
        if not c:
            continue
        b = basis[i]
        coef = c * inverse(b[i], p) % p
        out[i] = coef
        for k, w in b.items():
            if k == i:
                continue
            old = v.get(k)
            if old is None:
                v[k] = -coef * w % p
                heapq.heappush(heap, -k)
            else:
                nw = (old - coef * w) % p
                if nw:
                    v[k] = nw
                else:
                    del v[k]
    return {k: out[k] for k in sorted(out)}


@dataclass
class AlgebraicGradient:
    """Disjoint facet pairs (a, b) of basis positions over a tagged basis.

    ``basis`` holds each basis element in original (simplex) coordinates;
    ``None`` means the original basis itself.
    """

    pairs: tuple
    basis_tag: str
    p: int
    basis: Optional[list] = None

    def __post_init__(self):
        seen = set()
        for a, b in self.pairs:
            if a in seen or b in seen:
                raise ValueError(f"gradient pairs are not disjoint at ({a}, {b})")
            seen.update((a, b))

    def __len__(self):
        return len(self.pairs)

    def boundary(self, D: SparseColumnMatrix) -> list:
        """Boundary operator expressed in this gradient's basis."""
        if self.basis is None:
            return [dict(c) for c in D.columns]
        return [express_in_basis(D.apply(b), self.basis, self.p) for b in self.basis]

    def witness_function(self) -> list:
        """f(a) = f(b) = a for pairs, f(x) = x otherwise."""
        n = len(self.basis) if self.basis is not None else None
        f = {}
        for a, b in self.pairs:
            f[a] = f[b] = a
        return f if n is None else [f.get(i, i) for i in range(n)]

    def validate(self, D: SparseColumnMatrix) -> bool:
        """Check the facet-pair condition and that the witness function is an
        algebraic Morse function with exactly these pairs as its gradient."""
        bd = self.boundary(D)
        n = len(bd)
        f = self.witness_function()
        if isinstance(f, dict):
            f = [f.get(i, i) for i in range(n)]
        pairs = set(self.pairs)
        for a, b in pairs:
            if not bd[b].get(a):
                return False
        for b in range(n):
            for a in bd[b]:
                if f[a] > f[b]:
                    return False
                if (f[a] == f[b]) != ((a, b) in pairs):
                    return False
        return True


def reduction_basis(res: ReductionResult) -> list:
    """Original basis element at births/essentials, S column at deaths."""
    return [dict(res.S[i]) if i in res.birth_of else {i: 1} for i in range(len(res.S))]


def reduction_gradient(res: ReductionResult) -> AlgebraicGradient:
    """Pairs (pivot of R_j, S_j) for every death index j, on the reduction basis."""
    pairs = tuple((res.R.pivot(j), j) for _, j in res.index_pairs)
    return AlgebraicGradient(pairs, "reduction", res.p, reduction_basis(res))


def decomposition_basis(res: ReductionResult) -> list:
    """R_j at the birth index of each pair (i, j), S_i everywhere else."""
    basis = [dict(res.S[i]) for i in range(len(res.S))]
    for i, j in res.index_pairs:
        basis[i] = dict(res.R[j])
    return basis


def decomposition_gradient(res: ReductionResult) -> AlgebraicGradient:
    """Pairs (R_j, S_j) for every death index j, on the decomposition basis."""
    return AlgebraicGradient(tuple(res.index_pairs), "decomposition", res.p, decomposition_basis(res))
