"""Cell problems: for a fixed ``mu``, each simplex becomes a linear program in ``nu``.

A plan template holds the tree solution of ``A_sigma pi = (mu, nu)`` with
``nu`` symbolic.  Its nonzero entries must stay nonnegative, and the transport
cost is linear in ``nu`` on the cell.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .forms import AffineForm
from .transport import Distribution, GroundMetric
from .trees import TreeSimplex, solve_tree


def _mu_values(mu) -> dict[str, Fraction]:
    return {f"mu{j + 1}": x for j, x in enumerate(mu)}


@dataclass(frozen=True)
class PlanTemplate:
    """Tree solution with symbolic ``nu`` (and symbolic ``mu`` when ``mu`` is None)."""

    sigma: TreeSimplex
    entries: tuple[tuple[AffineForm, ...], ...]
    mu: Distribution | None

    @property
    def n(self) -> int:
        return self.sigma.n

    def row_sum(self, i: int) -> AffineForm:
        return sum(self.entries[i], AffineForm(0))

    def col_sum(self, j: int) -> AffineForm:
        return sum((self.entries[i][j] for i in range(self.n)), AffineForm(0))

    def evaluate(self, nu: Sequence) -> list[list]:
        """Numeric plan at a concrete ``nu`` (Fractions or QuadraticNumbers)."""
        values = {f"nu{i + 1}": x for i, x in enumerate(nu)}
        return [[e.evaluate(values) for e in r] for r in self.entries]


def plan_template(sigma: TreeSimplex, mu: Distribution | Sequence | None = None) -> PlanTemplate:
    n = sigma.n
    if mu is not None:
        if not isinstance(mu, Distribution):
            mu = Distribution(tuple(mu))
        if mu.n != n:
            raise ValidationError(f"dimension mismatch: simplex has n={n}, mu has {mu.n} entries")
    forms = solve_tree(sigma)
    if mu is not None:
        sub = _mu_values(mu)
        forms = {e: f.substitute(sub) for e, f in forms.items()}
    zero = AffineForm(0)
    entries = tuple(tuple(forms.get((i, j), zero) for j in range(n)) for i in range(n))
    return PlanTemplate(sigma, entries, mu)


@dataclass(frozen=True)
class CellProblem:
    """Minimize ``objective`` over ``nu`` subject to every constraint being >= 0.

    ``constraints`` lists one form per tree edge (2n-1 in total).  Forms that do
    not depend on ``nu`` are decided up front: a negative one makes the whole
    cell infeasible, a nonnegative one is dropped from ``active_constraints``.
    """

    template: PlanTemplate
    objective: AffineForm
    constraints: tuple[AffineForm, ...]
    cell_id: int
    infeasible: bool

    @property
    def sigma(self) -> TreeSimplex:
        return self.template.sigma

    @property
    def active_constraints(self) -> tuple[AffineForm, ...]:
        n = self.sigma.n
        return tuple(c for c in self.constraints if not c.normalized(n, ("nu",)).is_constant())


def cell_problem(sigma: TreeSimplex, mu, d: GroundMetric, cell_id: int = 0) -> CellProblem:
    if d.n != sigma.n:
        raise ValidationError(f"dimension mismatch: metric is {d.n}x{d.n}, simplex has n={sigma.n}")
    tmpl = plan_template(sigma, mu)
    n = sigma.n
    total = AffineForm(0)
    for i, j in sigma.edges:
        if d.cost[i][j]:
            total = total + tmpl.entries[i][j] * d.cost[i][j]
    prefixes = ("nu",) if tmpl.mu is not None else ("mu", "nu")
    objective = total.normalized(n, prefixes)
    constraints = tuple(tmpl.entries[i][j] for i, j in sigma.edges)
    # sum(nu) = 1 can turn an entry such as nu1 + nu2 + nu3 - 1/2 into a constant
    reduced = [c.normalized(n, ("nu",)) for c in constraints]
    infeasible = any(c.is_constant() and c.constant < 0 for c in reduced)
    return CellProblem(tmpl, objective, constraints, cell_id, infeasible)
