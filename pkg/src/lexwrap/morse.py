"""Generalized discrete Morse structure: gradient partitions, refinements,
apparent pairs, descending complexes and the Wrap complex."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Union

from .complex import ElementwiseFiltration, MonotonicityError, SimplicialComplex, facets_of


class NotMorseError(ValueError):
    """Equal-value components that are not face-poset intervals."""

    def __init__(self, component, lower, upper):
        self.component = sorted(component, key=lambda s: (len(s), s))
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"equal-value component {self.component} is not the interval [{lower}, {upper}]"
        )


@dataclass(frozen=True)
class Interval:
    lower: tuple
    upper: tuple
    members: tuple
    value: object = None

    @property
    def critical(self) -> bool:
        return self.lower == self.upper


class GradientPartition:
    """Partition of a complex into intervals [lower, upper]."""

    def __init__(self, K: SimplicialComplex, intervals: list, values: Optional[Mapping] = None):
        self.complex = K
        self.intervals = intervals
        self.values = values
        self.membership = {s: k for k, I in enumerate(intervals) for s in I.members}
        if len(self.membership) != len(K):
            raise ValueError("intervals do not partition the complex")

    def __len__(self):
        return len(self.intervals)

    def __repr__(self):
        return f"GradientPartition(intervals={len(self)}, critical={len(self.critical)})"

    @property
    def critical(self) -> list:
        return [I.lower for I in self.intervals if I.critical]

    @property
    def regular(self) -> list:
        return [I for I in self.intervals if not I.critical]

    def interval_of(self, s) -> Interval:
        return self.intervals[self.membership[tuple(s)]]


@dataclass(frozen=True)
class DiscretePairing:
    """Disjoint facet pairs (sigma, tau); everything unpaired is critical."""

    pairs: frozenset

    def __post_init__(self):
        seen = set()
        for s, t in self.pairs:
            if len(t) != len(s) + 1 or not set(s) <= set(t):
                raise ValueError(f"({s}, {t}) is not a facet pair")
            if s in seen or t in seen:
                raise ValueError(f"pairs are not disjoint at ({s}, {t})")
            seen.update((s, t))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs, key=lambda st: (len(st[1]), st[1])))

    def paired(self) -> set:
        return {s for pair in self.pairs for s in pair}

    def critical(self, K: SimplicialComplex) -> list:
        paired = self.paired()
        return [s for s in K if s not in paired]

    def to_partition(self, K: SimplicialComplex, values: Optional[Mapping] = None) -> GradientPartition:
        intervals = [Interval(s, t, (s, t), values[s] if values else None) for s, t in self]
        intervals += [Interval(s, s, (s,), values[s] if values else None) for s in self.critical(K)]
        return GradientPartition(K, intervals, values)


def _values(K, f) -> dict:
    return {s: (f(s) if callable(f) else f[s]) for s in K}


def gradient_partition(K: SimplicialComplex, f: Union[Mapping, Callable]) -> GradientPartition:
    """Gradient partition of a generalized discrete Morse function.

    Equal-value simplices are split into components under the facet relation;
    each component must be exactly the interval between its intersection and
    its union, otherwise :class:`NotMorseError` is raised with the component.
    """
    values = _values(K, f)
    parent = {s: s for s in K}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for t in K:
        for s in facets_of(t):
            if values[s] > values[t]:
                raise MonotonicityError(s, t, values[s], values[t])
            if values[s] == values[t]:
                a, b = find(s), find(t)
                if a != b:
                    parent[a] = b
    comps: dict = {}
    for s in K:
        comps.setdefault(find(s), []).append(s)
    intervals = []
    for members in comps.values():
        lower = set(members[0])
        upper = set()
        for s in members:
            lower &= set(s)
            upper |= set(s)
        lo, up = tuple(sorted(lower)), tuple(sorted(upper))
        if not lo or len(members) != 2 ** (len(up) - len(lo)):
            raise NotMorseError(members, lo, up)
        members.sort(key=lambda s: (len(s), s))
        intervals.append(Interval(lo, up, tuple(members), values[members[0]]))
    intervals.sort(key=lambda I: (I.value, len(I.lower), I.lower))
    return GradientPartition(K, intervals, values)


def minimal_vertex_refinement(V: GradientPartition) -> DiscretePairing:
    """Split every regular interval into pairs toggling v = min(upper - lower)."""
    pairs = set()
    for I in V.regular:
        v = min(set(I.upper) - set(I.lower))
        for psi in I.members:
            if v in psi:
                pairs.add((tuple(x for x in psi if x != v), psi))
    return DiscretePairing(frozenset(pairs))


def apparent_pairs(filtration: ElementwiseFiltration) -> DiscretePairing:
    """Pairs (sigma, tau): sigma the latest facet of tau, tau the earliest cofacet of sigma."""
    cof = filtration.cofacets
    S = filtration.simplices
    pairs = set()
    for j, fs in enumerate(filtration.facets):
        if fs:
            i = max(fs)
            if cof[i][0] == j:
                pairs.add((S[i], S[j]))
    return DiscretePairing(frozenset(pairs))


def zero_persistence_apparent_pairs(filtration: ElementwiseFiltration, f: Union[Mapping, Callable, None] = None) -> DiscretePairing:
    """Apparent pairs whose two simplices share a value (the filtration's own by default)."""
    value = filtration.value if f is None else (f if callable(f) else f.__getitem__)
    return DiscretePairing(frozenset((s, t) for s, t in apparent_pairs(filtration).pairs if value(s) == value(t)))


def descending_complex(
    V: GradientPartition,
    C: Optional[Iterable] = None,
    r=None,
    g: Union[Mapping, Callable, None] = None,
) -> SimplicialComplex:
    """Union of all intervals below the critical simplices in ``C``.

    With ``r`` given, ``C`` defaults to the critical simplices with g <= r,
    where ``g`` (default: the partition's values) must be constant on intervals.
    """
    critical = set(V.critical)
    if r is not None:
        if g is None:
            if V.values is None:
                raise ValueError("a scale needs a compatible function")
            gv = V.values.__getitem__
        else:
            gv = g if callable(g) else g.__getitem__
        for I in V.intervals:
            val = gv(I.members[0])
            if any(gv(s) != val for s in I.members[1:]):
                raise ValueError(f"function is not constant on interval [{I.lower}, {I.upper}]")
        chosen = [s for s in critical if gv(s) <= r] if C is None else [tuple(s) for s in C]
        if C is not None and any(gv(s) > r for s in chosen):
            raise ValueError("critical simplices above the scale")
    else:
        chosen = [tuple(s) for s in (C or ())]
    for s in chosen:
        if s not in critical:
            raise ValueError(f"{s} is not a critical simplex")
    member = V.membership
    seen = set()
    stack = [member[s] for s in chosen]
    seen.update(stack)
    while stack:
        k = stack.pop()
        for psi in V.intervals[k].members:
            for f in facets_of(psi):
                m = member[f]
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
    simplices = [s for k in seen for s in V.intervals[k].members]
    if V.values is not None:
        key = lambda s: (V.values[s], len(s), s)  # noqa: E731
    else:
        key = lambda s: (len(s), s)  # noqa: E731
    simplices.sort(key=key)
    return SimplicialComplex(simplices, closed=True, order=simplices)


def wrap_complex(X, r, *, partition: Optional[GradientPartition] = None) -> SimplicialComplex:
    """Wrap complex of a point cloud at radius ``r``.

    ``partition`` may carry a precomputed Delaunay radius gradient partition
    (values are squared radii).
    """
    from .geometry import delaunay_complex, delaunay_radius_values

    if r < 0:
        return SimplicialComplex()
    if partition is None:
        K = delaunay_complex(X)
        partition = gradient_partition(K, delaunay_radius_values(K, X))
    r2 = Fraction(r) ** 2
    return descending_complex(partition, r=r2)
