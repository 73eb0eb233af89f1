import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexwrap.complex import build_complex, elementwise_filtration
from lexwrap.geometry import PointCloud, delaunay_complex, delaunay_radius_values
from lexwrap.morse import (
    DiscretePairing,
    NotMorseError,
    apparent_pairs,
    descending_complex,
    gradient_partition,
    minimal_vertex_refinement,
    wrap_complex,
    zero_persistence_apparent_pairs,
)
from oracles import QUAD, down_closure, random_cloud, random_complex, random_gdmf

TRIANGLE = build_complex([(0, 1, 2)])
# {2}, {0,2}, {1,2}, {0,1,2} share one value: the interval [{2}, {0,1,2}]
BIG_INTERVAL = {(0,): 0, (1,): 1, (0, 1): 2, (2,): 3, (0, 2): 3, (1, 2): 3, (0, 1, 2): 3}


def test_injective_values_give_only_critical_intervals():
    f = {s: k for k, s in enumerate(TRIANGLE)}
    V = gradient_partition(TRIANGLE, f)
    assert len(V.critical) == 7 and not V.regular


def test_single_gradient_pair():
    K = build_complex([(0, 1)])
    V = gradient_partition(K, {(0,): 0, (1,): 1, (0, 1): 1})
    (I,) = V.regular
    assert (I.lower, I.upper) == ((1,), (0, 1))
    assert V.critical == [(0,)]


def test_four_simplex_interval_is_accepted():
    V = gradient_partition(TRIANGLE, BIG_INTERVAL)
    (I,) = V.regular
    assert (I.lower, I.upper) == ((2,), (0, 1, 2))
    assert set(I.members) == {(2,), (0, 2), (1, 2), (0, 1, 2)}
    assert V.interval_of((1, 2)) is I


def test_component_that_is_not_an_interval_is_rejected():
    f = dict(BIG_INTERVAL)
    f[(2,)] = 0
    with pytest.raises(NotMorseError) as err:
        gradient_partition(TRIANGLE, f)
    assert set(err.value.component) == {(0, 2), (1, 2), (0, 1, 2)}


def test_disjoint_equal_values_do_not_merge():
    K = build_complex([(0, 1), (2, 3)])
    V = gradient_partition(K, {(0,): 0, (1,): 0, (2,): 0, (3,): 0, (0, 1): 1, (2, 3): 1})
    assert len(V.critical) == 6


def test_minimal_vertex_refinement_examples():
    K = build_complex([(0, 1)])
    V = gradient_partition(K, {(0,): 0, (1,): 1, (0, 1): 1})
    assert minimal_vertex_refinement(V).pairs == {((1,), (0, 1))}
    W = minimal_vertex_refinement(gradient_partition(TRIANGLE, BIG_INTERVAL))
    assert W.pairs == {((2,), (0, 2)), ((1, 2), (0, 1, 2))}
    V = gradient_partition(TRIANGLE, {s: k for k, s in enumerate(TRIANGLE)})
    assert not minimal_vertex_refinement(V).pairs


def test_discrete_pairing_validation():
    with pytest.raises(ValueError):
        DiscretePairing(frozenset({((0,), (1, 2))}))
    with pytest.raises(ValueError):
        DiscretePairing(frozenset({((1,), (0, 1)), ((1,), (1, 2))}))


def test_apparent_pairs_examples():
    F = elementwise_filtration(build_complex([(0, 1)]), lambda s: 0)
    assert apparent_pairs(F).pairs == {((1,), (0, 1))}
    F = elementwise_filtration(TRIANGLE, lambda s: 0)
    assert apparent_pairs(F).pairs == {((1,), (0, 1)), ((2,), (0, 2)), ((1, 2), (0, 1, 2))}


def test_apparent_pairs_ignore_values():
    f = {s: len(s) for s in TRIANGLE}
    F = elementwise_filtration(TRIANGLE, f)
    assert apparent_pairs(F) == apparent_pairs(elementwise_filtration(TRIANGLE, lambda s: 0))
    assert not zero_persistence_apparent_pairs(F).pairs


def test_zero_persistence_pairs_on_fixture_match_refinement():
    F = elementwise_filtration(TRIANGLE, BIG_INTERVAL)
    V = gradient_partition(TRIANGLE, BIG_INTERVAL)
    assert zero_persistence_apparent_pairs(F) == minimal_vertex_refinement(V)


def test_quad_zero_persistence_criticals_match_partition():
    X = PointCloud(QUAD)
    K = delaunay_complex(X)
    r = delaunay_radius_values(K, X)
    W = zero_persistence_apparent_pairs(elementwise_filtration(K, r))
    assert set(W.critical(K)) == set(gradient_partition(K, r).critical)


def test_descending_complex_examples():
    K = build_complex([(0, 1)])
    V = gradient_partition(K, {(0,): 0, (1,): 1, (0, 1): 1})
    assert len(descending_complex(V, [])) == 0
    assert set(descending_complex(V, [(0,)])) == {(0,)}
    with pytest.raises(ValueError):
        descending_complex(V, [(1,)])
    f = {s: k for k, s in enumerate(TRIANGLE)}
    V = gradient_partition(TRIANGLE, f)
    assert set(descending_complex(V, r=4)) == {s for s in TRIANGLE if f[s] <= 4}


def test_descending_complex_needs_compatible_function():
    V = gradient_partition(TRIANGLE, BIG_INTERVAL)
    g = dict(BIG_INTERVAL)
    g[(1, 2)] = 7
    with pytest.raises(ValueError):
        descending_complex(V, r=10, g=g)
    assert descending_complex(V, r=3, g=BIG_INTERVAL).is_closed()


def test_wrap_of_quad_below_first_triangle():
    X = PointCloud(QUAD)
    K = delaunay_complex(X)
    r = delaunay_radius_values(K, X)
    first = min(v for s, v in r.items() if len(s) == 3)
    radius = Fraction(7105, 10000)  # first triangle radius is about 0.71063
    assert radius**2 < first
    W = wrap_complex(X, radius)
    assert set(W) == down_closure([(0, 1), (1, 2), (2, 3), (0, 3)])
    assert not any(len(s) == 3 for s in W)
    assert len(wrap_complex(X, -1)) == 0


def test_wrap_of_obtuse_triangle_skips_the_long_edge():
    X = PointCloud([(0, 0), (4, 0), (2, 1)])
    W = wrap_complex(X, 100)
    assert set(W) == {(0,), (1,), (2,), (0, 2), (1, 2)}
    acute = PointCloud([(0, 0), (4, 0), (2, 3)])
    assert len(wrap_complex(acute, 100)) == 7


@settings(max_examples=50)
@given(seed=st.integers(0, 10**6), d=st.sampled_from([2, 3]))
def test_wrap_is_monotone_and_inside_the_sublevel_complex(seed, d):
    rng = random.Random(seed)
    X = random_cloud(rng, rng.randrange(d + 2, 20), d)
    K = delaunay_complex(X)
    r = delaunay_radius_values(K, X)
    V = gradient_partition(K, r)
    values = sorted(set(r.values()))
    prev = set()
    for v in values:
        W = set(descending_complex(V, r=v))
        assert prev <= W
        assert W <= {s for s in K if r[s] <= v}
        prev = W


def _gdmf_instance(seed):
    rng = random.Random(seed)
    K = random_complex(rng, n_vertices=rng.randrange(4, 8), n_top=rng.randrange(1, 9), dim=rng.choice([2, 3]))
    return rng, K, random_gdmf(rng, K)


@settings(max_examples=200)
@given(seed=st.integers(0, 10**6))
def test_zero_persistence_apparent_pairs_are_the_refinement(seed):
    _, K, f = _gdmf_instance(seed)
    V = gradient_partition(K, f)
    W = minimal_vertex_refinement(V)
    assert zero_persistence_apparent_pairs(elementwise_filtration(K, f)) == W
    assert set(W.critical(K)) == set(V.critical)


@settings(max_examples=200)
@given(seed=st.integers(0, 10**6))
def test_refined_descending_complex_is_nested(seed):
    rng, K, f = _gdmf_instance(seed)
    V = gradient_partition(K, f)
    Vt = minimal_vertex_refinement(V).to_partition(K, f)
    crit = V.critical
    for _ in range(3):
        C = rng.sample(crit, rng.randrange(len(crit) + 1))
        small = descending_complex(Vt, C)
        assert small.is_closed()
        assert small.issubcomplex(descending_complex(V, C))


def test_random_gdmf_has_regular_intervals():
    regular = 0
    for seed in range(30):
        _, K, f = _gdmf_instance(seed)
        regular += len(gradient_partition(K, f).regular)
    assert regular > 30
