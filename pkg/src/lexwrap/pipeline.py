"""End-to-end reconstruction, theorem verification and file I/O."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence, Union

from .complex import Chain, ElementwiseFiltration, SimplicialComplex, elementwise_filtration, facets_of
from .flow import lex_minimal_cycle
from .geometry.points import to_fraction
from .geometry import DelaunayComplex, PointCloud, delaunay_complex, delaunay_radius_values
from .morse import GradientPartition, descending_complex, gradient_partition
from .reduction import (
    Bar,
    ReductionResult,
    SparseColumnMatrix,
    exhaustive_reduce,
    filtration_boundary_matrix,
    persistence_pairs_and_barcode,
)

FORMATS = ("xyz", "csv", "off")


class PointsFormatError(ValueError):
    """Unparsable point file; ``line`` is 1-based."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NoFeatureError(ValueError):
    pass


class TheoremViolation(RuntimeError):
    """A support-containment check failed; ``witness`` lists the escaping simplices."""

    def __init__(self, message: str, witness: Sequence = ()):
        self.witness = list(witness)
        super().__init__(f"{message}: {self.witness}")


# --------------------------------------------------------------------- input


def _parse_row(fields: list, line: int) -> tuple:
    try:
        row = tuple(Fraction(f.strip()) for f in fields)
    except (ValueError, ZeroDivisionError):
        raise PointsFormatError(f"cannot parse coordinates {fields!r}", line) from None
    return row


def _rows_xyz(text: str) -> list:
    rows = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((n, _parse_row(line.split(), n)))
    return rows


def _rows_csv(text: str) -> list:
    rows = []
    for n, fields in enumerate(csv.reader(io.StringIO(text)), 1):
        if not fields or not "".join(fields).strip() or fields[0].lstrip().startswith("#"):
            continue
        try:
            rows.append((n, _parse_row(fields, n)))
        except PointsFormatError:
            if rows or any(_is_number(f) for f in fields):
                raise
            # header row
    return rows


def _is_number(s: str) -> bool:
    try:
        Fraction(s.strip())
        return True
    except (ValueError, ZeroDivisionError):
        return False


def _rows_off(text: str) -> list:
    lines = [(n, raw.split("#", 1)[0].split()) for n, raw in enumerate(text.splitlines(), 1)]
    lines = [(n, toks) for n, toks in lines if toks]
    if not lines or not lines[0][1][0].endswith("OFF"):
        raise PointsFormatError("missing OFF header", lines[0][0] if lines else 1)
    n0, head = lines[0]
    rest = lines[1:]
    counts = head[1:]
    if not counts:
        if not rest:
            raise PointsFormatError("missing vertex/face counts", n0)
        n0, counts = rest[0]
        rest = rest[1:]
    try:
        nv = int(counts[0])
    except ValueError:
        raise PointsFormatError(f"bad vertex count {counts[0]!r}", n0) from None
    if len(rest) < nv:
        raise PointsFormatError(f"expected {nv} vertices, found {len(rest)}", rest[-1][0] if rest else n0)
    return [(n, _parse_row(toks[:3], n)) for n, toks in rest[:nv]]


def load_points(path: Union[str, os.PathLike], format: Optional[str] = None, perturb: bool = False) -> PointCloud:
    """Read a point cloud; vertex ids follow file order.

    ``format`` defaults to the file extension. Coordinates are parsed as
    exact decimals.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt not in FORMATS:
        raise PointsFormatError(f"unknown point format {fmt!r}; expected one of {', '.join(FORMATS)}")
    text = path.read_text()
    rows = {"xyz": _rows_xyz, "csv": _rows_csv, "off": _rows_off}[fmt](text)
    if not rows:
        raise PointsFormatError("no points in file")
    d = len(rows[0][1])
    for n, r in rows:
        if len(r) != d:
            raise PointsFormatError(f"expected {d} coordinates, got {len(r)}", n)
    if d not in (2, 3):
        raise PointsFormatError(f"points must have 2 or 3 coordinates, got {d}", rows[0][0])
    seen: dict = {}
    for n, r in rows:
        if r in seen:
            raise PointsFormatError(f"duplicate point (first seen on line {seen[r]})", n)
        seen[r] = n
    return PointCloud([r for _, r in rows], perturb=perturb)


# ----------------------------------------------------------------- filtration


@dataclass
class DelaunayFiltration:
    """Delaunay complex of a cloud with its radius function, filtration and reduction.

    Values are exact squared radii.
    """

    points: PointCloud
    complex: DelaunayComplex
    values: dict
    partition: GradientPartition
    filtration: ElementwiseFiltration
    D: SparseColumnMatrix
    reduction: ReductionResult

    @classmethod
    def build(cls, X: PointCloud, p: int = 2) -> "DelaunayFiltration":
        K = delaunay_complex(X)
        values = delaunay_radius_values(K, X)
        V = gradient_partition(K, values)
        F = elementwise_filtration(K, values)
        D = filtration_boundary_matrix(F, p)
        return cls(X, K, values, V, F, D, exhaustive_reduce(D))

    @property
    def p(self) -> int:
        return self.D.p

    def barcode(self) -> list:
        return persistence_pairs_and_barcode(self.reduction, self.filtration)

    def wrap(self, r2: Fraction) -> SimplicialComplex:
        """Wrap complex at squared radius ``r2``."""
        return descending_complex(self.partition, r=r2)

    def chain(self, column: dict, degree: int) -> Chain:
        return Chain._trusted(dict(column), degree, self.p)

    def simplices_of(self, keys) -> list:
        S = self.filtration.simplices
        return [S[k] for k in sorted(keys)]


def radius(value2: Fraction) -> float:
    return math.sqrt(value2)


def _escaping(support: list, K: SimplicialComplex) -> list:
    return [s for s in support if s not in K]


# -------------------------------------------------------------- reconstruct


@dataclass
class ReconstructionReport:
    dim: int
    birth: float
    death: float
    ratio: float
    birth_simplex: tuple
    death_simplex: tuple
    cycle: list  # (simplex, coefficient)
    wrap: SimplicialComplex
    containment: bool
    watertight: Optional[bool]
    points: PointCloud
    p: int
    barcode: list = field(default_factory=list)

    @property
    def metadata(self) -> dict:
        return {
            "points": len(self.points),
            "ambient_dim": self.points.dim,
            "field": self.p,
            "perturbed": self.points.perturbed,
            "perturbation": float(self.points.perturbation),
        }

    @property
    def support(self) -> list:
        return [s for s, _ in self.cycle]

    def to_dict(self) -> dict:
        return {
            "interval": {
                "dim": self.dim,
                "birth": self.birth,
                "death": self.death,
                "ratio": self.ratio,
                "birth_simplex": list(self.birth_simplex),
                "death_simplex": list(self.death_simplex),
            },
            "cycle": [{"simplex": list(s), "coefficient": c} for s, c in self.cycle],
            "wrap": {
                "size": len(self.wrap),
                "counts": [self.wrap.count(k) for k in range(self.wrap.dimension + 1)],
                "simplices": [list(s) for s in sorted(self.wrap, key=lambda s: (len(s), s))],
            },
            "containment": self.containment,
            "watertight": self.watertight,
            "barcode": barcode_records(self.barcode),
            "metadata": self.metadata,
        }


def is_watertight(triangles: list) -> bool:
    """Every edge of the triangles lies in exactly two of them."""
    if not triangles:
        return False
    degree: dict = {}
    for t in triangles:
        for e in facets_of(t):
            degree[e] = degree.get(e, 0) + 1
    return all(v == 2 for v in degree.values())


def euler_characteristic(top: list) -> int:
    """V - E + F - ... of the closure of ``top``."""
    faces = {f for s in top for k in range(1, len(s) + 1) for f in combinations(s, k)}
    return sum((-1) ** (len(f) - 1) for f in faces)


def select_feature(bars: list, dim: int) -> Bar:
    """Finite bar of the given dimension with the largest death/birth ratio.

    Births must be positive and deaths later than births; ties go to the
    earlier death.
    """
    best = None
    for b in bars:
        if b.dim != dim or b.death is None or b.birth <= 0 or b.death == b.birth:
            continue
        key = (b.death / b.birth, -b.death_index)
        if best is None or key > best[0]:
            best = (key, b)
    if best is None:
        raise NoFeatureError(f"no finite interval of positive length and birth in dimension {dim}")
    return best[1]


def reconstruct(X: PointCloud, dim: int = 1, p: int = 2, *, bundle: Optional[DelaunayFiltration] = None) -> ReconstructionReport:
    """Cycle of the most persistent feature, with its Wrap-complex certificate.

    Raises :class:`NoFeatureError` when no finite positive-birth interval
    exists and :class:`TheoremViolation` if the cycle leaves the Wrap
    complex at its birth radius.
    """
    if not 1 <= dim <= X.dim:
        raise ValueError(f"homology dimension must be in 1..{X.dim}, got {dim}")
    if bundle is None:
        bundle = DelaunayFiltration.build(X, p)
    bars = bundle.barcode()
    bar = select_feature(bars, dim)
    S = bundle.filtration.simplices
    column = bundle.reduction.R[bar.death_index]
    cycle = [(S[k], column[k]) for k in sorted(column)]
    wrap = bundle.wrap(bundle.values[bar.birth_simplex])
    escaped = _escaping([s for s, _ in cycle], wrap)
    watertight = is_watertight([s for s, _ in cycle]) if dim == 2 else None
    report = ReconstructionReport(
        dim=dim,
        birth=radius(bar.birth),
        death=radius(bar.death),
        ratio=math.sqrt(bar.death / bar.birth),
        birth_simplex=bar.birth_simplex,
        death_simplex=bar.death_simplex,
        cycle=cycle,
        wrap=wrap,
        containment=not escaped,
        watertight=watertight,
        points=X,
        p=p,
        barcode=bars,
    )
    if escaped:
        raise TheoremViolation("reconstructed cycle leaves the Wrap complex", escaped)
    return report


# ------------------------------------------------------------------- verify


@dataclass
class CheckCounts:
    passed: int = 0
    failed: int = 0

    def add(self, ok: bool):
        if ok:
            self.passed += 1
        else:
            self.failed += 1


@dataclass
class VerificationReport:
    lex_min_in_wrap: CheckCounts = field(default_factory=CheckCounts)
    death_column_in_wrap: CheckCounts = field(default_factory=CheckCounts)
    reduction_column_descending: CheckCounts = field(default_factory=CheckCounts)
    failures: list = field(default_factory=list)
    radii: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        def counts(c):
            return {"passed": c.passed, "failed": c.failed}

        return {
            "ok": self.ok,
            "radii": len(self.radii),
            "lex_min_in_wrap": counts(self.lex_min_in_wrap),
            "death_column_in_wrap": counts(self.death_column_in_wrap),
            "reduction_column_descending": counts(self.reduction_column_descending),
            "failures": self.failures,
        }


def critical_values(bundle: DelaunayFiltration) -> list:
    return sorted({I.value for I in bundle.partition.intervals if I.critical})


def sublevel_generators(res: ReductionResult, m: int) -> list:
    """Indices whose S-columns form a homology basis of the first ``m`` simplices."""
    return [i for i in range(m) if not res.R[i] and res.death_of.get(i, m) >= m]


def _check_radius(bundle: DelaunayFiltration, r2: Fraction) -> list:
    res = bundle.reduction
    m = bundle.filtration.prefix_length(r2)
    wrap = bundle.wrap(r2)
    S = bundle.filtration.simplices
    dims = bundle.D.dims
    out = []
    for i in sublevel_generators(res, m):
        z = bundle.chain(res.S[i], dims[i])
        lex = lex_minimal_cycle(z, res, upto=m)
        escaped = _escaping([S[k] for k in lex], wrap)
        out.append((S[i], escaped))
    return out


def verify_theorems(
    X: Union[PointCloud, DelaunayFiltration],
    r_grid: Union[str, Sequence] = "auto",
    p: int = 2,
    n_jobs: Optional[int] = None,
) -> VerificationReport:
    """Check the support theorems on the Delaunay filtration of ``X``.

    For every radius in ``r_grid`` (``"auto"``: all critical radii) the
    lexicographically minimal cycle of each homology generator of the
    sublevel complex must lie in the Wrap complex. The map to lex-minimal
    cycles is linear, so a basis covers every class. Independently, every
    death column R_j of a non-zero pair must lie in the Wrap complex at its
    birth value, and every reduction column S_j of a critical simplex in the
    descending complex at its own value.
    """
    bundle = X if isinstance(X, DelaunayFiltration) else DelaunayFiltration.build(X, p)
    if r_grid == "auto":
        grid = critical_values(bundle)
    else:
        grid = sorted({to_fraction(r) ** 2 if to_fraction(r) >= 0 else Fraction(-1) for r in r_grid})
    report = VerificationReport(radii=[radius(r2) if r2 >= 0 else -1.0 for r2 in grid])

    if n_jobs and n_jobs != 1 and len(grid) > 1:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=n_jobs)(delayed(_check_radius)(bundle, r2) for r2 in grid)
    else:
        results = [_check_radius(bundle, r2) for r2 in grid]
    for r2, checks in zip(grid, results):
        for gen, escaped in checks:
            report.lex_min_in_wrap.add(not escaped)
            if escaped:
                report.failures.append(
                    {"check": "lex_min_in_wrap", "radius": radius(max(r2, Fraction(0))), "generator": list(gen), "witness": [list(s) for s in escaped]}
                )

    res, F, values = bundle.reduction, bundle.filtration, bundle.values
    S = F.simplices
    critical = set(bundle.partition.critical)
    for i, j in res.index_pairs:
        if values[S[i]] == values[S[j]]:
            continue
        escaped = _escaping([S[k] for k in res.R[j]], bundle.wrap(values[S[i]]))
        report.death_column_in_wrap.add(not escaped)
        if escaped:
            report.failures.append({"check": "death_column_in_wrap", "pair": [list(S[i]), list(S[j])], "witness": [list(s) for s in escaped]})
    for j, tau in enumerate(S):
        if tau not in critical:
            continue
        escaped = _escaping([S[k] for k in res.S[j]], bundle.wrap(values[tau]))
        report.reduction_column_descending.add(not escaped)
        if escaped:
            report.failures.append({"check": "reduction_column_descending", "simplex": list(tau), "witness": [list(s) for s in escaped]})
    return report


# ------------------------------------------------------------------- export


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def barcode_records(bars: list) -> list:
    return [
        {
            "dim": b.dim,
            "birth": radius(b.birth),
            "death": None if b.death is None else radius(b.death),
            "birth_simplex": list(b.birth_simplex),
            "death_simplex": None if b.death_simplex is None else list(b.death_simplex),
        }
        for b in bars
    ]


def _coords(X: PointCloud, v: int) -> str:
    c = [float(x) for x in X[v]] + [0.0] * (3 - X.dim)
    return " ".join(repr(x) for x in c)


def _mesh(X: PointCloud, cells: list) -> tuple:
    verts = sorted({v for s in cells for v in s})
    local = {v: k for k, v in enumerate(verts)}
    return verts, [[local[v] for v in s] for s in cells]


def write_off(path: Path, X: PointCloud, cells: list):
    verts, faces = _mesh(X, cells)
    lines = ["OFF", f"{len(verts)} {len(faces)} 0"]
    lines += [_coords(X, v) for v in verts]
    lines += [" ".join(map(str, [len(f)] + f)) for f in faces]
    path.write_text("\n".join(lines) + "\n")


def write_obj(path: Path, X: PointCloud, cells: list):
    verts, faces = _mesh(X, cells)
    lines = [f"v {_coords(X, v)}" for v in verts]
    for f in faces:
        tag = "l" if len(f) == 2 else "f"
        lines.append(" ".join([tag] + [str(k + 1) for k in f]))
    path.write_text("\n".join(lines) + "\n")


def mesh_cells(K: SimplicialComplex) -> list:
    """Triangles plus edges that bound no triangle."""
    triangles = [s for s in K if len(s) == 3]
    covered = {e for t in triangles for e in facets_of(t)}
    edges = [s for s in K if len(s) == 2 and s not in covered]
    return sorted(edges) + sorted(triangles)


def export(report: ReconstructionReport, out_dir: Union[str, os.PathLike]) -> dict:
    """Write barcode.json, cycle.off, cycle.obj, wrap.off and report.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    X = report.points
    paths = {name: out / name for name in ("barcode.json", "cycle.off", "cycle.obj", "wrap.off", "report.json")}
    paths["barcode.json"].write_text(_json(barcode_records(report.barcode)))
    cells = sorted(report.support)
    write_off(paths["cycle.off"], X, cells)
    write_obj(paths["cycle.obj"], X, cells)
    write_off(paths["wrap.off"], X, mesh_cells(report.wrap))
    paths["report.json"].write_text(_json(report.to_dict()))
    return paths
