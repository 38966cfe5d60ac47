from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import interior_distributions, metrics
from wassmodel import (
    AffineForm,
    Distribution,
    GroundMetric,
    TreeSimplex,
    ValidationError,
    cell_problem,
    discrete_metric,
    hamming_metric_2bit,
    plan_template,
    regular_triangulation,
    value_functional,
    wasserstein,
)

F = Fraction
MU3 = Distribution((F(1, 2), F(1, 7), F(5, 14)))


def nu(i):
    return AffineForm.var(f"nu{i}")


def mu(j):
    return AffineForm.var(f"mu{j}")


def on_simplex(a, b, n):
    """Equality of affine forms once sum(mu) = sum(nu) = 1 is used."""
    return (a - b).normalized(n) == AffineForm(0)


def _by_complement(n, gens):
    return TreeSimplex.from_complement(n, [(i - 1, j - 1) for i, j in gens])


def test_third_component_template():
    sigma = _by_complement(3, [(1, 2), (1, 3), (3, 1), (3, 2)])
    e = plan_template(sigma, MU3).entries
    assert e[0][0] == nu(1)
    assert e[1][0] == F(1, 2) - nu(1)
    assert e[1][1] == AffineForm(F(1, 7))
    assert e[1][2] == F(5, 14) - nu(3)
    assert e[2][2] == nu(3)
    assert e[0][1] == e[0][2] == e[2][0] == e[2][1] == AffineForm(0)


def test_census_template_symbolic():
    sigma = _by_complement(4, [(1, 1), (1, 3), (1, 4), (2, 1), (2, 3), (2, 4), (4, 1), (4, 3), (4, 4)])
    e = plan_template(sigma).entries
    row3 = [mu(1), mu(2) - nu(1) - nu(2) - nu(4), mu(3), mu(4)]
    assert all(on_simplex(e[2][j], row3[j], 4) for j in range(4))
    for i in (0, 1, 3):
        assert e[i][1] == nu(i + 1)
        assert all(e[i][j] == AffineForm(0) for j in (0, 2, 3))


def test_two_state_template():
    sigma = TreeSimplex(2, ((0, 0), (0, 1), (1, 1)))
    e = plan_template(sigma, (F(1, 2), F(1, 2))).entries
    assert e[0][0] == AffineForm(F(1, 2))
    assert e[0][1] == nu(1) - F(1, 2)
    assert e[1][1] == nu(2)


def test_case2_cell_problem():
    sigma = _by_complement(4, [(1, 1), (1, 3), (1, 4), (2, 1), (2, 3), (2, 4), (4, 1), (4, 3), (4, 4)])
    m = Distribution((F(1, 10), F(4, 10), F(4, 10), F(1, 10)))
    cell = cell_problem(sigma, m, hamming_metric_2bit())
    want = (F(4, 10) - F(4, 10) - nu(2) + nu(3)).normalized(4, ("nu",))
    assert cell.objective == want
    target = F(4, 10) - nu(1) - nu(2) - nu(4)
    assert [c for c in cell.active_constraints if on_simplex(c, target, 4)]


def test_constant_constraints_decide_feasibility():
    t = regular_triangulation(discrete_metric(3))
    cells = [cell_problem(s, MU3, discrete_metric(3), k) for k, s in enumerate(t.simplices, 1)]
    assert not any(c.infeasible for c in cells)
    for m in [Distribution((F(1), F(0), F(0))), Distribution((F(0), F(1, 2), F(1, 2)))]:
        for s in t.simplices:
            c = cell_problem(s, m, discrete_metric(3))
            reduced = [k.normalized(3, ("nu",)) for k in c.constraints]
            assert c.infeasible == any(k.is_constant() and k.constant < 0 for k in reduced)
            assert all(not k.normalized(3, ("nu",)).is_constant() for k in c.active_constraints)
            # constant entries are partial sums of mu, so boundary mu never trips them
            assert not c.infeasible


def test_zero_metric_objective():
    zero = GroundMetric(((0,) * 3,) * 3)
    for s in regular_triangulation(discrete_metric(3)).simplices:
        assert cell_problem(s, MU3, zero).objective == AffineForm(0)


def test_dimension_mismatch():
    sigma = TreeSimplex(2, ((0, 0), (0, 1), (1, 1)))
    with pytest.raises(ValidationError):
        cell_problem(sigma, MU3, discrete_metric(3))
    with pytest.raises(ValidationError):
        plan_template(sigma, MU3)


@settings(max_examples=30)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(metrics(n), interior_distributions(n))))
def test_marginal_identities(args):
    d, m = args
    n = d.n
    for s in regular_triangulation(d).simplices:
        tmpl = plan_template(s, m)
        cell = cell_problem(s, m, d)
        assert len(cell.constraints) == 2 * n - 1
        sym = plan_template(s)
        for k in range(n):
            assert on_simplex(tmpl.col_sum(k), AffineForm(m[k]), n)
            assert on_simplex(tmpl.row_sum(k), nu(k + 1), n)
            assert on_simplex(sym.col_sum(k), mu(k + 1), n)
            assert on_simplex(sym.row_sum(k), nu(k + 1), n)
        support = {(i, j) for i in range(n) for j in range(n) if tmpl.entries[i][j] != AffineForm(0)}
        assert support <= set(s.edges)


@settings(max_examples=30)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(metrics(n), interior_distributions(n), interior_distributions(n))))
def test_feasible_template_is_optimal(args):
    d, m, v = args
    n = d.n
    point = {f"nu{i + 1}": v[i] for i in range(n)}
    value, _ = wasserstein(d, m, v)
    for s in regular_triangulation(d).simplices:
        cell = cell_problem(s, m, d)
        vals = [c.evaluate(point) for c in cell.constraints]
        if all(x >= 0 for x in vals):
            plan = cell.template.evaluate(v.mass)
            assert all(x <= 1 for r in plan for x in r)
            assert cell.objective.evaluate(point) == value
            assert cell.objective == value_functional(s, d).substitute(
                {f"mu{j + 1}": m[j] for j in range(n - 1)}).normalized(n, ("nu",))
