"""Simplicial complexes, chains over Z/p and elementwise filtrations.

Simplices are plain tuples of strictly increasing vertex ids; the sorted
order is the canonical orientation. Chains are sparse maps from basis keys
(usually filtration positions) to non-zero residues mod a prime ``p``.
"""

from __future__ import annotations

import bisect
import enum
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

Simplex = tuple  # tuple[int, ...], strictly increasing


class MonotonicityError(ValueError):
    """A filtration value decreases along a facet pair."""

    def __init__(self, facet, cofacet, facet_value, cofacet_value):
        self.facet = facet
        self.cofacet = cofacet
        super().__init__(
            f"f{facet} = {facet_value} > f{cofacet} = {cofacet_value}: "
            "values must be monotone under face inclusion"
        )


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def check_field(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"field characteristic must be a prime, got {p!r}")
    return p


def inverse(a: int, p: int) -> int:
    """Multiplicative inverse of a non-zero residue mod p."""
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical simplex from a vertex collection."""
    verts = tuple(sorted(set(int(v) for v in vertices)))
    if not verts:
        raise ValueError("a simplex needs at least one vertex")
    if verts[0] < 0:
        raise ValueError(f"vertex ids must be non-negative, got {verts}")
    return verts


def facets_of(s: Simplex) -> list[Simplex]:
    """Facets of ``s`` in the order of the removed vertex (index k removes s[k])."""
    if len(s) == 1:
        return []
    return [s[:k] + s[k + 1 :] for k in range(len(s))]


def _dim_lex_key(s: Simplex):
    return (len(s), s)


class SimplicialComplex:
    """Finite simplicial complex, closed under taking non-empty faces.

    Iteration follows ``order`` when given (it must list every simplex once),
    otherwise dimension-then-lexicographic order.
    """

    def __init__(self, simplices: Iterable[Iterable[int]] = (), *, closed: bool = False, order=None):
        tops = {simplex(s) for s in simplices}
        if closed:
            all_simplices = tops
        else:
            all_simplices = set()
            for s in tops:
                if s in all_simplices:
                    continue
                for k in range(1, len(s) + 1):
                    all_simplices.update(combinations(s, k))
        self._set = frozenset(all_simplices)
        if order is None:
            self._order = tuple(sorted(self._set, key=_dim_lex_key))
        else:
            self._order = tuple(order)
            if len(self._order) != len(self._set) or set(self._order) != self._set:
                raise ValueError("order must enumerate the simplices exactly once")
        self._cofacets: Optional[dict] = None

    def __contains__(self, s) -> bool:
        return tuple(s) in self._set

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._set)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._set == other._set

    def __hash__(self):
        return hash(self._set)

    def __repr__(self):
        return f"{type(self).__name__}(n_simplices={len(self)}, dim={self.dimension})"

    @property
    def simplices(self) -> frozenset:
        return self._set

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self._set), default=-1)

    @property
    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self._set if len(s) == 1)

    def skeleton(self, k: int) -> list[Simplex]:
        """Simplices of dimension exactly ``k`` in dimension-lex order."""
        return sorted(s for s in self._set if len(s) == k + 1)

    def count(self, k: int) -> int:
        return sum(1 for s in self._set if len(s) == k + 1)

    def facets(self, s: Simplex) -> list[Simplex]:
        return facets_of(tuple(s))

    def cofacets(self, s: Simplex) -> list[Simplex]:
        if self._cofacets is None:
            cof: dict = {t: [] for t in self._set}
            for t in self._set:
                for f in facets_of(t):
                    cof[f].append(t)
            for lst in cof.values():
                lst.sort()
            self._cofacets = cof
        return self._cofacets[tuple(s)]

    def issubcomplex(self, other: "SimplicialComplex") -> bool:
        return self._set <= other._set

    def is_closed(self) -> bool:
        return all(f in self._set for s in self._set for f in facets_of(s))


def build_complex(simplex_list: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of a list of vertex sets."""
    return SimplicialComplex(simplex_list)


class Chain:
    """Sparse chain with coefficients in Z/p.

    Keys are basis labels: filtration positions (ints) for everything that
    needs an order, or simplices for free-standing boundary computations.
    Zero coefficients are never stored.
    """

    __slots__ = ("_entries", "degree", "p")

    def __init__(self, entries: Union[Mapping, Iterable, None] = None, degree: int = 0, p: int = 2):
        self.degree = degree
        self.p = p
        self._entries: dict = {}
        if entries is None:
            return
        items = entries.items() if isinstance(entries, Mapping) else ((k, 1) for k in entries)
        for key, value in items:
            value = (self._entries.get(key, 0) + value) % p
            if value:
                self._entries[key] = value
            else:
                self._entries.pop(key, None)

    @classmethod
    def _trusted(cls, entries: dict, degree: int, p: int) -> "Chain":
        c = cls.__new__(cls)
        c._entries = entries
        c.degree = degree
        c.p = p
        return c

    def __getitem__(self, key) -> int:
        return self._entries.get(key, 0)

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def items(self):
        return self._entries.items()

    def to_dict(self) -> dict:
        return dict(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.p == other.p and self._entries == other._entries

    def __hash__(self):
        return hash((self.p, frozenset(self._entries.items())))

    def __repr__(self):
        terms = " + ".join(f"{v}*{k}" for k, v in sorted(self._entries.items()))
        return f"Chain({terms or '0'}, degree={self.degree}, p={self.p})"

    def _check(self, other: "Chain"):
        if self.p != other.p:
            raise ValueError(f"cannot combine chains over Z/{self.p} and Z/{other.p}")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = dict(self._entries)
        p = self.p
        for k, v in other._entries.items():
            w = (out.get(k, 0) + v) % p
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return Chain._trusted(out, self.degree, p)

    def __neg__(self) -> "Chain":
        return self.scale(-1)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scale(self, k: int) -> "Chain":
        k %= self.p
        if k == 0:
            return Chain._trusted({}, self.degree, self.p)
        return Chain._trusted({key: v * k % self.p for key, v in self._entries.items()}, self.degree, self.p)

    __rmul__ = scale

    def support(self) -> frozenset:
        return frozenset(self._entries)

    def pivot(self):
        """Maximal key of the support, ``None`` for the zero chain."""
        return max(self._entries) if self._entries else None


def boundary_chain(s: Iterable[int], p: int = 2, index: Optional[Mapping] = None) -> Chain:
    """Boundary of an oriented simplex: sum of (-1)^k times the k-th facet.

    With ``index`` the result is keyed by basis positions, otherwise by facets.
    """
    s = simplex(s)
    entries = {}
    for k, f in enumerate(facets_of(s)):
        key = index[f] if index is not None else f
        entries[key] = (-1) ** k % p
    return Chain(entries, degree=len(s) - 2, p=p)


def chain_boundary(c: Chain) -> Chain:
    """Boundary of a simplex-keyed chain."""
    out = Chain(degree=c.degree - 1, p=c.p)
    for s, v in c.items():
        out = out + boundary_chain(s, c.p).scale(v)
    return out


def chain_pivot(c: Chain):
    """Position of the latest basis element in the support (``None`` for 0)."""
    return c.pivot()


class LexComparison(enum.IntEnum):
    LESS = -1
    EQUAL_SUPPORT = 0
    GREATER = 1


def lex_compare_chains(a: Chain, b: Chain) -> LexComparison:
    """Compare supports lexicographically: the latest element of the symmetric
    difference decides. Chains with equal support compare equal even when
    their coefficients differ, so this is only a preorder for p > 2."""
    if a.degree != b.degree:
        raise ValueError(f"cannot compare chains of degree {a.degree} and {b.degree}")
    sa, sb = a.support(), b.support()
    diff = sa ^ sb
    if not diff:
        return LexComparison.EQUAL_SUPPORT
    return LexComparison.LESS if max(diff) in sb else LexComparison.GREATER


class ElementwiseFiltration:
    """A total order on the simplices of a complex whose prefixes are subcomplexes.

    Attributes
    ----------
    simplices : tuple of simplices in filtration order
    values : filtration value per position (non-decreasing)
    index : simplex -> position
    facets : per position, facet positions in removed-vertex order
    """

    def __init__(self, simplices: Sequence[Simplex], values: Optional[Sequence] = None):
        self.simplices = tuple(simplex(s) for s in simplices)
        n = len(self.simplices)
        self.values = tuple(values) if values is not None else tuple(range(n))
        if len(self.values) != n:
            raise ValueError("one value per simplex is required")
        self.index = {s: i for i, s in enumerate(self.simplices)}
        if len(self.index) != n:
            raise ValueError("duplicate simplex in filtration order")
        self.dims = tuple(len(s) - 1 for s in self.simplices)
        self.facets: list[tuple] = []
        for j, s in enumerate(self.simplices):
            fs = []
            for f in facets_of(s):
                i = self.index.get(f)
                if i is None or i >= j:
                    raise ValueError(f"prefix ending at {s} is not a subcomplex: facet {f} missing before it")
                fs.append(i)
            self.facets.append(tuple(fs))
        for j in range(1, n):
            if self.values[j] < self.values[j - 1]:
                raise ValueError(f"values decrease at position {j}: {self.values[j - 1]} > {self.values[j]}")
        self._cofacets: Optional[list] = None

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __repr__(self):
        return f"ElementwiseFiltration(n={len(self)})"

    @property
    def cofacets(self) -> list[list[int]]:
        if self._cofacets is None:
            cof = [[] for _ in self.simplices]
            for j, fs in enumerate(self.facets):
                for i in fs:
                    cof[i].append(j)
            self._cofacets = cof  # ascending, since j is visited in order
        return self._cofacets

    def value(self, s) -> object:
        return self.values[self.index[tuple(s)]]

    def boundary_column(self, j: int, p: int = 2) -> dict:
        """Boundary of the j-th simplex as ``{row: coeff}`` sorted by row."""
        entries = {i: (-1) ** k % p for k, i in enumerate(self.facets[j])}
        return {i: entries[i] for i in sorted(entries)}

    def boundary_chain(self, j: int, p: int = 2) -> Chain:
        return Chain._trusted(self.boundary_column(j, p), self.dims[j] - 1, p)

    def chain(self, entries, p: int = 2) -> Chain:
        """Chain keyed by positions from a simplex- or position-keyed mapping."""
        items = entries.items() if isinstance(entries, Mapping) else ((k, 1) for k in entries)
        out = {}
        degree = None
        for k, v in items:
            i = self.index[tuple(k)] if isinstance(k, tuple) else int(k)
            out[i] = v
            degree = self.dims[i]
        return Chain(out, degree=degree if degree is not None else 0, p=p)

    def prefix_length(self, r) -> int:
        """Number of simplices with value <= r (the sublevel set is a prefix)."""
        return bisect.bisect_right(self.values, r)

    def open_prefix_length(self, r) -> int:
        return bisect.bisect_left(self.values, r)

    def complex(self, upto: Optional[int] = None) -> SimplicialComplex:
        order = self.simplices if upto is None else self.simplices[:upto]
        return SimplicialComplex(order, closed=True, order=order)

    def is_face_closed_prefixes(self) -> bool:
        seen = set()
        for s in self.simplices:
            if any(f not in seen for f in facets_of(s)):
                return False
            seen.add(s)
        return True


def _as_callable(f) -> Callable:
    if callable(f):
        return f
    return lambda s: f[s]


def elementwise_filtration(K: SimplicialComplex, f: Union[Mapping, Callable]) -> ElementwiseFiltration:
    """The f-lexicographic order: by value, then dimension, then vertex lex.

    Raises :class:`MonotonicityError` naming a facet pair where f decreases.
    """
    fv = _as_callable(f)
    values = {s: fv(s) for s in K}
    for s in K:
        for t in facets_of(s):
            if values[t] > values[s]:
                raise MonotonicityError(t, s, values[t], values[s])
    order = sorted(K, key=lambda s: (values[s], len(s), s))
    return ElementwiseFiltration(order, [values[s] for s in order])


def filtration_from_order(order: Sequence[Iterable[int]], values: Optional[Sequence] = None) -> ElementwiseFiltration:
    """Filtration from an explicit simplex order (validated)."""
    return ElementwiseFiltration([simplex(s) for s in order], values)

