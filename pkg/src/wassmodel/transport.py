"""Exact transportation problem between two distributions on ``[n]``.

Orientation follows the model-fitting convention used throughout the package:
column ``j`` of a plan sums to ``mu_j`` and row ``i`` sums to ``nu_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapabilityError, ValidationError
from .exact import to_rational
from .trees import TreeSimplex, enumerate_spanning_trees, solve_tree_numeric, tree_duals, tree_path

MAX_ORACLE_N = 4


@dataclass(frozen=True)
class Distribution:
    mass: tuple[Fraction, ...]

    def __post_init__(self):
        try:
            mass = tuple(to_rational(x) for x in self.mass)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"invalid probability entry: {exc}") from exc
        if not mass:
            raise ValidationError("empty distribution")
        if any(x < 0 for x in mass):
            raise ValidationError("distribution has a negative entry")
        if sum(mass) != 1:
            raise ValidationError(f"distribution sums to {sum(mass)}, not 1")
        object.__setattr__(self, "mass", mass)

    @property
    def n(self) -> int:
        return len(self.mass)

    def __len__(self):
        return len(self.mass)

    def __getitem__(self, i):
        return self.mass[i]

    def __iter__(self):
        return iter(self.mass)


@dataclass(frozen=True)
class GroundMetric:
    """Symmetric, nonnegative cost matrix with zero diagonal."""

    cost: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        try:
            cost = tuple(tuple(to_rational(x) for x in r) for r in self.cost)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"invalid cost entry: {exc}") from exc
        n = len(cost)
        if n == 0 or any(len(r) != n for r in cost):
            raise ValidationError("cost matrix must be square and non-empty")
        for i in range(n):
            if cost[i][i] != 0:
                raise ValidationError(f"cost[{i + 1}][{i + 1}] must be 0")
            for j in range(n):
                if cost[i][j] < 0:
                    raise ValidationError(f"cost[{i + 1}][{j + 1}] is negative")
                if cost[i][j] != cost[j][i]:
                    raise ValidationError(f"cost matrix is not symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "cost", cost)

    @property
    def n(self) -> int:
        return len(self.cost)

    def __getitem__(self, i):
        return self.cost[i]

    def max_entry(self) -> Fraction:
        return max(max(r) for r in self.cost)

    def satisfies_triangle_inequality(self) -> bool:
        c = self.cost
        n = self.n
        return all(c[i][k] <= c[i][j] + c[j][k]
                   for i in range(n) for j in range(n) for k in range(n))


def discrete_metric(n: int) -> GroundMetric:
    return GroundMetric(tuple(tuple(0 if i == j else 1 for j in range(n)) for i in range(n)))


def hamming_metric_2bit() -> GroundMetric:
    """Hamming distance on {0,1}^2 with states ordered 00, 01, 10, 11."""
    return GroundMetric(((0, 1, 1, 2), (1, 0, 2, 1), (1, 2, 0, 1), (2, 1, 1, 0)))


@dataclass(frozen=True)
class TransportPlan:
    entries: tuple[tuple, ...]
    support: frozenset = field(default=frozenset())

    def __post_init__(self):
        if not self.support:
            supp = frozenset((i, j) for i, r in enumerate(self.entries)
                             for j, x in enumerate(r) if x != 0)
            object.__setattr__(self, "support", supp)

    @property
    def n(self) -> int:
        return len(self.entries)

    def row_sums(self):
        return [sum(r, Fraction(0)) for r in self.entries]

    def col_sums(self):
        n = self.n
        return [sum((self.entries[i][j] for i in range(n)), Fraction(0)) for j in range(n)]

    def cost(self, d: GroundMetric):
        return sum((d.cost[i][j] * self.entries[i][j] for i, j in self.support), Fraction(0))

    def sparse(self) -> list[tuple[int, int, object]]:
        """Nonzero entries as 1-based ``(i, j, value)`` triples."""
        return [(i + 1, j + 1, self.entries[i][j]) for i, j in sorted(self.support)]


def _check_inputs(d: GroundMetric, mu: Distribution, nu: Distribution):
    if not (d.n == mu.n == nu.n):
        raise ValidationError(f"dimension mismatch: d is {d.n}x{d.n}, mu has {mu.n}, nu has {nu.n}")


def northwest_corner(mu: Sequence[Fraction], nu: Sequence[Fraction]):
    """Staircase basic solution: 2n-1 basic cells forming a spanning tree."""
    n = len(mu)
    rem_r = list(nu)
    rem_c = list(mu)
    i = j = 0
    basis: list[tuple[int, int]] = []
    flow: dict[tuple[int, int], Fraction] = {}
    while True:
        amt = min(rem_r[i], rem_c[j])
        basis.append((i, j))
        flow[(i, j)] = amt
        rem_r[i] -= amt
        rem_c[j] -= amt
        if i == n - 1 and j == n - 1:
            break
        if j == n - 1 or (rem_r[i] == 0 and i < n - 1):
            i += 1
        else:
            j += 1
    return basis, flow


def network_simplex(cost, mu: Sequence[Fraction], nu: Sequence[Fraction]):
    """Primal network simplex with Bland's rule.

    ``cost`` may hold any ordered additive numbers (the triangulation code
    passes lexicographically perturbed costs).  Returns ``(basis, flow)`` with
    ``basis`` a list of 2n-1 tree edges.
    """
    n = len(mu)
    basis, flow = northwest_corner(mu, nu)
    index = {(i, j): i * n + j for i in range(n) for j in range(n)}
    zero = cost[0][0] - cost[0][0]
    while True:
        sigma = TreeSimplex(n, tuple(basis))
        u, v = tree_duals(sigma, cost)
        entering = None
        for i in range(n):
            for j in range(n):
                if (i, j) in flow:
                    continue
                if cost[i][j] - u[i] - v[j] < zero:
                    entering = (i, j)
                    break
            if entering:
                break
        if entering is None:
            return sorted(basis), flow
        path = tree_path(sigma, ("c", entering[1]), ("r", entering[0]))
        minus = []
        for k, (a, b) in enumerate(zip(path, path[1:])):
            e = (a[1], b[1]) if a[0] == "r" else (b[1], a[1])
            if k % 2 == 0:
                minus.append(e)
        plus = [((a[1], b[1]) if a[0] == "r" else (b[1], a[1]))
                for k, (a, b) in enumerate(zip(path, path[1:])) if k % 2 == 1]
        theta = min(flow[e] for e in minus)
        leaving = min((e for e in minus if flow[e] == theta), key=index.__getitem__)
        for e in minus:
            flow[e] -= theta
        for e in plus:
            flow[e] += theta
        flow[entering] = theta
        del flow[leaving]
        basis.remove(leaving)
        basis.append(entering)


def wasserstein(d: GroundMetric, mu: Distribution, nu: Distribution) -> tuple[Fraction, TransportPlan]:
    """Exact optimal transport cost and an optimal vertex plan."""
    if not isinstance(mu, Distribution):
        mu = Distribution(tuple(mu))
    if not isinstance(nu, Distribution):
        nu = Distribution(tuple(nu))
    _check_inputs(d, mu, nu)
    n = d.n
    basis, flow = network_simplex(d.cost, mu.mass, nu.mass)
    entries = tuple(tuple(flow.get((i, j), Fraction(0)) for j in range(n)) for i in range(n))
    plan = TransportPlan(entries)
    return plan.cost(d), plan


def enumerate_vertices(mu: Distribution, nu: Distribution) -> list[TransportPlan]:
    """All vertices of the transportation polytope, by brute force over trees."""
    if not isinstance(mu, Distribution):
        mu = Distribution(tuple(mu))
    if not isinstance(nu, Distribution):
        nu = Distribution(tuple(nu))
    n = mu.n
    if nu.n != n:
        raise ValidationError("dimension mismatch")
    if n > MAX_ORACLE_N:
        raise CapabilityError(f"oracle restricted to n ≤ {MAX_ORACLE_N}")
    if n == 1:
        return [TransportPlan(((Fraction(1),),))]
    seen = set()
    out = []
    for sigma in enumerate_spanning_trees(n):
        sol = solve_tree_numeric(sigma, mu.mass, nu.mass)
        if any(x < 0 for x in sol.values()):
            continue
        entries = tuple(tuple(sol.get((i, j), Fraction(0)) for j in range(n)) for i in range(n))
        if entries not in seen:
            seen.add(entries)
            out.append(TransportPlan(entries))
    out.sort(key=lambda p: p.entries)
    return out
