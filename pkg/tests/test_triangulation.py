import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN, interior_distributions, metrics, random_metric, read_components
from wassmodel import (
    AffineForm,
    GroundMetric,
    TreeSimplex,
    coarsen,
    discrete_metric,
    dual_feasible_trees,
    enumerate_spanning_trees,
    hamming_metric_2bit,
    reduced_cost,
    regular_triangulation,
    secondary_cone,
    to_monomial_ideal,
    value_functional,
    wasserstein,
)
from wassmodel.trees import solve_tree_numeric
from wassmodel.triangulation import in_secondary_cone, ideal_components


def _components(t):
    return [frozenset(c) for c in ideal_components(t)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_count_identity(n):
    rng = random.Random(100 + n)
    for _ in range(100):
        t = regular_triangulation(random_metric(rng, n))
        assert len(t.simplices) == comb(2 * n - 2, n - 1)
        assert len(set(t.simplices)) == len(t.simplices)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_flip_walk_matches_exhaustive_filter(n):
    rng = random.Random(7 * n)
    for d in [discrete_metric(n), random_metric(rng, n), random_metric(rng, n, hi=2, den=1)]:
        assert set(regular_triangulation(d).simplices) == set(dual_feasible_trees(d))


def test_hamming_flip_walk_matches_exhaustive_filter():
    d = hamming_metric_2bit()
    assert set(regular_triangulation(d).simplices) == set(dual_feasible_trees(d))


def test_canonical_order_and_determinism():
    d = hamming_metric_2bit()
    a, b = regular_triangulation(d), regular_triangulation(d)
    assert a.simplices == b.simplices
    keys = [s.complement() for s in a.simplices]
    assert keys == sorted(keys)


def test_two_state_triangulation():
    t = regular_triangulation(GroundMetric(((0, 3), (3, 0))))
    assert len(t.simplices) == 2
    assert to_monomial_ideal(regular_triangulation(discrete_metric(2))) == "⟨y_{12}⟩ ∩\n⟨y_{21}⟩"


def test_discrete3_ideal_golden():
    t = regular_triangulation(discrete_metric(3))
    text = to_monomial_ideal(t)
    assert text + "\n" == (GOLDEN / "discrete3_ideal.txt").read_text(encoding="utf-8")
    assert _components(t)[2] == {(1, 2), (1, 3), (3, 1), (3, 2)}
    assert not t.perturbed


def test_hamming_ideal_golden():
    t = regular_triangulation(hamming_metric_2bit())
    want = read_components("hamming4_ideal.txt")
    assert len(want) == 20
    assert set(_components(t)) == set(want)
    assert t.perturbed
    assert set(want[0]) == {(1, 1), (1, 2), (1, 4), (3, 1), (3, 2), (3, 4), (4, 1), (4, 2), (4, 4)}


@pytest.mark.parametrize("n,cells", [(2, 2), (3, 6), (4, 14), (5, 30)])
def test_discrete_coarsening(n, cells):
    t = regular_triangulation(discrete_metric(n))
    groups = coarsen(t)
    assert len(groups) == cells == 2 ** n - 2
    members = [s for g in groups for s in g.member_simplices]
    assert sorted(members, key=lambda s: s.edges) == sorted(t.simplices, key=lambda s: s.edges)


def test_coarsen_partitions_random_metrics():
    rng = random.Random(5)
    for n in (3, 4):
        for _ in range(5):
            t = regular_triangulation(random_metric(rng, n, hi=3, den=1))
            members = [s for g in coarsen(t) for s in g.member_simplices]
            assert len(members) == len(set(members)) == len(t.simplices)
            for g in coarsen(t):
                assert all(value_functional(s, t.metric) == g.value_functional for s in g.member_simplices)


def test_value_functional_examples():
    t = regular_triangulation(hamming_metric_2bit())
    second = next(s for s in t.simplices if {(i + 1, j + 1) for i, j in s.complement()}
                  == {(1, 1), (1, 3), (1, 4), (2, 1), (2, 3), (2, 4), (4, 1), (4, 3), (4, 4)})
    vf = value_functional(second, hamming_metric_2bit())
    mu = {f"mu{i}": AffineForm.var(f"mu{i}") for i in range(1, 5)}
    nu = {f"nu{i}": AffineForm.var(f"nu{i}") for i in range(1, 5)}
    want = (mu["mu2"] - mu["mu3"] - nu["nu2"] + nu["nu3"]).normalized(4)
    assert vf == want
    zero = GroundMetric(((0,) * 4,) * 4)
    assert all(value_functional(s, zero) == AffineForm(0) for s in t.simplices)


def test_secondary_cone_examples():
    d = discrete_metric(3)
    cone = secondary_cone(regular_triangulation(d))
    text = {str(q) for q in cone}
    assert "d_{12} + d_{21} > d_{11} + d_{22}" in text
    assert "d_{23} + d_{32} > d_{22} + d_{33}" in text
    assert in_secondary_cone(cone, d.cost)
    bad = [list(r) for r in d.cost]
    bad[0][1] = bad[1][0] = 0
    assert not in_secondary_cone(cone, bad)


@given(st.integers(3, 4).flatmap(metrics))
def test_cone_membership_predicts_triangulation(d):
    # every generic metric lies in the cone of its own triangulation
    t = regular_triangulation(d)
    if not t.perturbed:
        assert in_secondary_cone(secondary_cone(t), d.cost)


@settings(max_examples=40)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(metrics(n), interior_distributions(n), interior_distributions(n))))
def test_covering_and_compatibility(args):
    d, mu, nu = args
    t = regular_triangulation(d)
    value, _ = wasserstein(d, mu, nu)
    hits = 0
    for s in t.simplices:
        sol = solve_tree_numeric(s, mu.mass, nu.mass)
        if all(x >= 0 for x in sol.values()):
            hits += 1
            assert sum(d.cost[i][j] * x for (i, j), x in sol.items()) == value
    assert hits >= 1


@settings(max_examples=25)
@given(st.integers(2, 4).flatmap(metrics), st.randoms(use_true_random=False))
def test_continuity_across_shared_facets(d, rnd):
    t = regular_triangulation(d)
    n = d.n
    pairs = 0
    for a in t.simplices:
        for b in t.simplices:
            shared = sorted(set(a.edges) & set(b.edges))
            if a.edges >= b.edges or len(shared) != 2 * n - 2:
                continue
            pairs += 1
            # a random plan supported on the common forest is a point of the shared facet
            w = {e: Fraction(rnd.randint(1, 30)) for e in shared}
            total = sum(w.values())
            point = {f"mu{j + 1}": sum((x for (_, c), x in w.items() if c == j), Fraction(0)) / total
                     for j in range(n)}
            point |= {f"nu{i + 1}": sum((x for (r, _), x in w.items() if r == i), Fraction(0)) / total
                      for i in range(n)}
            fa = value_functional(a, d, normalize=False).evaluate(point)
            fb = value_functional(b, d, normalize=False).evaluate(point)
            assert fa == fb == sum(d.cost[i][j] * x for (i, j), x in w.items()) / total
    assert pairs > 0


@given(st.integers(2, 4).flatmap(metrics))
def test_perturbation_soundness(d):
    # brute force with the raw metric: trees whose reduced costs are all strictly positive
    n = d.n
    strict = {s for s in enumerate_spanning_trees(n)
              if all(reduced_cost(s, d.cost, e) > 0 for e in s.complement())}
    t = regular_triangulation(d)
    if not t.perturbed:
        assert set(t.simplices) == strict
    else:
        assert strict <= set(t.simplices)


def test_zero_metric_is_fully_perturbed():
    zero = GroundMetric(((0,) * 3,) * 3)
    t = regular_triangulation(zero)
    assert t.perturbed
    assert len(t.simplices) == 6
    assert len(coarsen(t)) == 1


def test_triangulation_from_complement_roundtrip():
    for s in regular_triangulation(discrete_metric(4)).simplices:
        assert TreeSimplex.from_complement(4, s.complement()) == s


def test_unsupported_size():
    from wassmodel import CapabilityError
    with pytest.raises(CapabilityError):
        regular_triangulation(discrete_metric(9))


def test_fraction_metric_entries():
    d = GroundMetric(((0, Fraction(1, 3)), (Fraction(1, 3), 0)))
    assert len(regular_triangulation(d).simplices) == 2
