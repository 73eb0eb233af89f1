"""Acceptance criteria, one test each, at their stated sizes and time limits.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import random
import time

import pytest

from lexwrap.complex import Chain, elementwise_filtration
from lexwrap.flow import (
    apply_F,
    flow_once,
    gradient_facets,
    gradient_flow_reduction,
    lex_minimal_cycle,
    stabilized_flow,
    stabilized_flow_reduction,
)
from lexwrap.morse import (
    descending_complex,
    gradient_partition,
    minimal_vertex_refinement,
    zero_persistence_apparent_pairs,
)
from lexwrap.pipeline import euler_characteristic, is_watertight, reconstruct, verify_theorems
from lexwrap.reduction import (
    compatibility_checks,
    exhaustive_reduce,
    filtration_boundary_matrix,
    standard_reduce,
)
from oracles import (
    FlowInstance,
    betti_numbers,
    circle_cloud,
    lex_min_all_classes_z2,
    random_cloud,
    random_complex,
    random_filtration,
    random_gdmf,
    sphere_cloud,
)

SEEDS_2D = range(200)
SEEDS_3D = range(50)
FIELDS = (2, 3)


def _clouds():
    for seed in SEEDS_2D:
        rng = random.Random(seed)
        yield random_cloud(rng, rng.randrange(4, 26), 2)
    for seed in SEEDS_3D:
        rng = random.Random(10_000 + seed)
        yield random_cloud(rng, rng.randrange(5, 21), 3)


@pytest.fixture(scope="module")
def support_reports():
    """Support-theorem reports for every (cloud, field), with the total wall time."""
    start = time.perf_counter()
    reports = [verify_theorems(X, "auto", p) for X in _clouds() for p in FIELDS]
    return reports, time.perf_counter() - start


@pytest.mark.criterion(1, "lex-minimal cycles of sublevel classes lie in the Wrap complex")
def test_lex_minimal_cycles_lie_in_wrap(support_reports):
    reports, seconds = support_reports
    assert len(reports) == (len(SEEDS_2D) + len(SEEDS_3D)) * len(FIELDS)
    failures = [f for r in reports for f in r.failures if f["check"] == "lex_min_in_wrap"]
    checked = sum(r.lex_min_in_wrap.passed + r.lex_min_in_wrap.failed for r in reports)
    print(f"{checked} generator checks, {len(failures)} failures, {seconds:.1f} s")
    assert checked > 0 and not failures, failures[:3]
    assert seconds < 120


@pytest.mark.criterion(2, "death columns in the Wrap complex, reduction columns in descending complexes")
def test_death_and_reduction_columns(support_reports):
    reports, _ = support_reports
    deaths = sum(r.death_column_in_wrap.passed + r.death_column_in_wrap.failed for r in reports)
    columns = sum(r.reduction_column_descending.passed + r.reduction_column_descending.failed for r in reports)
    failures = [f for r in reports for f in r.failures if f["check"] != "lex_min_in_wrap"]
    print(f"{deaths} death columns, {columns} reduction columns, {len(failures)} failures")
    assert deaths > 0 and columns > 0 and not failures, failures[:3]


@pytest.mark.criterion(3, "lex-minimal cycle equals the exhaustive minimum over Z/2")
def test_lex_min_matches_exhaustive_search():
    start = time.perf_counter()
    classes = 0
    for seed in range(100):
        rng = random.Random(seed)
        F = random_filtration(rng, n_vertices=rng.randrange(4, 9), n_top=rng.randrange(5, 16), dim=2)
        assert F.complex().count(2) <= 15
        res = exhaustive_reduce(filtration_boundary_matrix(F))
        dims = F.dims
        for m in sorted({F.prefix_length(v) for v in F.values}):
            for n in range(dims[m - 1] + 1):
                gens = [i for i in range(m) if dims[i] == n and not res.R[i] and res.death_of.get(i, m) >= m]
                if not gens:
                    continue
                # compress the degree-n simplices to consecutive bits, keeping their order
                cells = [k for k in range(m) if dims[k] == n]
                bit = {k: b for b, k in enumerate(cells)}
                cycles = [[bit[k] for k in res.S[i]] for i in gens]
                boundaries = [[bit[k] for k in F.boundary_column(j)] for j in range(m) if dims[j] == n + 1]
                expected = lex_min_all_classes_z2(cycles, boundaries)
                for code, best in expected.items():
                    z: dict = {}
                    for t, i in enumerate(gens):
                        if code >> t & 1:
                            for k in res.S[i]:
                                z[k] = z.get(k, 0) ^ 1
                    out = lex_minimal_cycle(Chain(z, degree=n), res, upto=m)
                    assert sum(1 << bit[k] for k in out) == best, (seed, m, n, code)
                    classes += 1
    seconds = time.perf_counter() - start
    print(f"{classes} classes, {seconds:.1f} s")
    assert classes > 0 and seconds < 60


@pytest.mark.criterion(4, "ascending pass and elimination agree with the flow; chain-map identities")
def test_flow_cross_checks():
    start = time.perf_counter()
    for seed in range(200):
        inst = FlowInstance(seed)
        ctx = inst.ctx
        z = inst.cycle()
        assert gradient_flow_reduction(ctx, z) == flow_once(ctx, z)
        fixed = stabilized_flow(ctx, z)
        for order in ("max", "min"):
            out = stabilized_flow_reduction(ctx, z, order=order)
            assert out == fixed and not gradient_facets(ctx, out)
        c = inst.chain()
        phi = flow_once(ctx, c)
        assert ctx.d(phi) == flow_once(ctx, ctx.d(c))
        assert phi - c == ctx.d(apply_F(ctx, c)) + apply_F(ctx, ctx.d(c))
    seconds = time.perf_counter() - start
    print(f"200 instances, {seconds:.1f} s")
    assert seconds < 60


@pytest.mark.criterion(5, "zero-persistence apparent pairs are the refinement; refined descending complexes nest")
def test_morse_structure():
    intervals = 0
    for seed in range(200):
        rng = random.Random(seed)
        dim = rng.choice([2, 3])
        K = random_complex(rng, n_vertices=rng.randrange(dim + 1, 8), n_top=rng.randrange(1, 9), dim=dim)
        f = random_gdmf(rng, K)
        V = gradient_partition(K, f)
        W = minimal_vertex_refinement(V)
        assert zero_persistence_apparent_pairs(elementwise_filtration(K, f)) == W
        Vt = W.to_partition(K, f)
        crit = V.critical
        for _ in range(3):
            C = rng.sample(crit, rng.randrange(len(crit) + 1))
            assert descending_complex(Vt, C).issubcomplex(descending_complex(V, C))
        intervals += len(V.regular)
    print(f"200 instances, {intervals} regular intervals")
    assert intervals > 0


@pytest.mark.criterion(6, "reduction identities, pair agreement, Betti numbers, compatibility")
def test_reduction_suite():
    sizes = []
    for seed in range(200):
        rng = random.Random(seed)
        p = rng.choice([2, 3])
        dim = rng.choice([1, 2, 3])
        F = random_filtration(rng, n_vertices=rng.randrange(dim + 1, 8), n_top=rng.randrange(1, 9), dim=dim)
        if len(F) > 60:
            continue
        sizes.append(len(F))
        D = filtration_boundary_matrix(F, p)
        std, exh = standard_reduce(D), exhaustive_reduce(D)
        assert std.verify() and exh.verify()
        assert std.index_pairs == exh.index_pairs and std.essential == exh.essential
        counts = [0] * (max(F.dims) + 1)
        for i in exh.essential:
            counts[F.dims[i]] += 1
        assert counts == betti_numbers(F.complex(), p)
        flags = compatibility_checks(std)
        assert flags["apparent_pairs_compatible"] and flags["death_compatible"]
    print(f"{len(sizes)} complexes, up to {max(sizes)} simplices")
    assert len(sizes) >= 150


@pytest.mark.criterion(7, "circle and sphere reconstructions")
def test_figure_analogues():
    start = time.perf_counter()
    rep = reconstruct(circle_cloud(12), dim=1)
    circle_seconds = time.perf_counter() - start
    assert len(rep.support) == 12 and rep.containment
    assert sorted(v for e in rep.support for v in e) == sorted(list(range(12)) * 2)

    start = time.perf_counter()
    rep = reconstruct(sphere_cloud(40, seed=0), dim=2)
    sphere_seconds = time.perf_counter() - start
    assert rep.watertight and euler_characteristic(rep.support) == 2
    assert is_watertight(rep.support) and all(s in rep.wrap for s in rep.support)
    print(f"circle {circle_seconds:.2f} s, sphere {sphere_seconds:.2f} s")
    assert circle_seconds < 10 and sphere_seconds < 10


@pytest.mark.criterion(8, "2000-point sphere reconstruction")
def test_scale_smoke():
    start = time.perf_counter()
    rep = reconstruct(sphere_cloud(2000, seed=0), dim=2)
    seconds = time.perf_counter() - start
    print(f"{len(rep.support)} triangles, {seconds:.1f} s")
    assert rep.containment
    assert seconds < 300
