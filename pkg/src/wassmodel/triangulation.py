"""Regular triangulation of Delta_{n-1} x Delta_{n-1} induced by a ground metric.

A spanning tree belongs to the triangulation exactly when it is a dual-feasible
basis of the transportation LP: every non-tree edge has a strictly positive
reduced cost.  Ties (zero reduced costs) are broken by a symbolic perturbation
``d_eps = d + sum_k eps**k * E_k``, compared lexicographically.

The main constructor walks the flip graph from one optimal tree, crossing each
interior facet with a dual-simplex pivot.  :func:`dual_feasible_trees` is the
brute-force filter over all spanning trees and serves as a cross-check.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import CapabilityError
from .forms import AffineForm
from .transport import GroundMetric, network_simplex
from .trees import (
    TreeSimplex,
    col,
    cycle_signs,
    enumerate_spanning_trees,
    reduced_cost,
    row,
    solve_tree,
    tree_duals,
)

MAX_TRIANGULATION_N = 8


class LexNumber:
    """``value + sum_k coeffs[k] * eps**(k+1)`` for an infinitesimal eps > 0."""

    __slots__ = ("value", "coeffs")

    def __init__(self, value, coeffs: tuple):
        self.value = value
        self.coeffs = coeffs

    def _key(self):
        return (self.value,) + self.coeffs

    def __add__(self, other):
        return LexNumber(self.value + other.value, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return LexNumber(self.value - other.value, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return LexNumber(-self.value, tuple(-a for a in self.coeffs))

    def sign(self) -> int:
        for x in self._key():
            if x:
                return 1 if x > 0 else -1
        return 0

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __eq__(self, other):
        return isinstance(other, LexNumber) and (self - other).sign() == 0

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"LexNumber({self.value}, {self.coeffs})"


def perturbed_cost(d: GroundMetric):
    """Cost matrix of LexNumbers: entry (i, j) gets ``+eps**((i-1)n + j)``.

    The positional weights make d_11 the most significant perturbation.
    """
    n = d.n
    N = n * n
    out = []
    for i in range(n):
        r = []
        for j in range(n):
            vec = [0] * N
            vec[i * n + j] = 1
            r.append(LexNumber(Fraction(d.cost[i][j]), tuple(vec)))
        out.append(r)
    return out


def is_dual_feasible(sigma: TreeSimplex, cost) -> bool:
    u, v = tree_duals(sigma, cost)
    zero = cost[0][0] - cost[0][0]
    tree = set(sigma.edges)
    n = sigma.n
    for i in range(n):
        for j in range(n):
            if (i, j) not in tree and not (cost[i][j] - u[i] - v[j] > zero):
                return False
    return True


@dataclass(frozen=True)
class Triangulation:
    n: int
    metric: GroundMetric
    simplices: tuple[TreeSimplex, ...]
    perturbed: bool

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def index(self, sigma: TreeSimplex) -> int:
        return self.simplices.index(sigma)


@dataclass(frozen=True)
class SubdivisionCell:
    member_simplices: tuple[TreeSimplex, ...]
    value_functional: AffineForm


def _initial_tree(cost, n: int) -> TreeSimplex:
    uniform = [Fraction(1, n)] * n
    basis, _ = network_simplex(cost, uniform, uniform)
    return TreeSimplex(n, tuple(basis))


def _neighbours(sigma: TreeSimplex, cost):
    """Simplices sharing an interior facet with ``sigma``."""
    n = sigma.n
    u, v = tree_duals(sigma, cost)
    adj = sigma.adjacency()
    for e in sigma.edges:
        # split the tree at e; side A holds e's row node
        side = {row(e[0])}
        queue = deque([row(e[0])])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in side or {x, y} == {row(e[0]), col(e[1])}:
                    continue
                side.add(y)
                queue.append(y)
        rows_b = [i for i in range(n) if row(i) not in side]
        cols_a = [j for j in range(n) if col(j) in side]
        if not rows_b or not cols_a:
            continue  # boundary facet
        best = None
        best_rc = None
        for i in rows_b:
            for j in cols_a:
                rc = cost[i][j] - u[i] - v[j]
                if best is None or rc < best_rc:
                    best, best_rc = (i, j), rc
        edges = tuple(x for x in sigma.edges if x != e) + (best,)
        yield TreeSimplex(n, edges)


def regular_triangulation(d: GroundMetric) -> Triangulation:
    """Maximal simplices of the (perturbed) regular triangulation.

    Simplices are ordered by their sorted list of non-edges (the generators of
    the matching prime component), so cell ids are stable across runs.
    """
    n = d.n
    if n < 1 or n > MAX_TRIANGULATION_N:
        raise CapabilityError(f"triangulation supports 1 <= n <= {MAX_TRIANGULATION_N}, got n={n}")
    cost = perturbed_cost(d)
    if n == 1:
        simplices = (TreeSimplex(1, ((0, 0),)),)
        return Triangulation(1, d, simplices, False)
    start = _initial_tree(cost, n)
    seen = {start}
    queue = deque([start])
    while queue:
        sigma = queue.popleft()
        for tau in _neighbours(sigma, cost):
            if tau not in seen:
                seen.add(tau)
                queue.append(tau)
    simplices = tuple(sorted(seen, key=lambda s: s.complement()))
    expected = comb(2 * n - 2, n - 1)
    if len(simplices) != expected:
        raise AssertionError(f"flip walk found {len(simplices)} simplices, expected {expected}")
    return Triangulation(n, d, simplices, _needs_perturbation(simplices, d))


def _needs_perturbation(simplices, d: GroundMetric) -> bool:
    for sigma in simplices:
        u, v = tree_duals(sigma, d.cost)
        for i, j in sigma.complement():
            if d.cost[i][j] - u[i] - v[j] == 0:
                return True
    return False


def dual_feasible_trees(d: GroundMetric) -> list[TreeSimplex]:
    """Brute-force triangulation: filter every spanning tree by dual feasibility."""
    cost = perturbed_cost(d)
    return [s for s in enumerate_spanning_trees(d.n) if is_dual_feasible(s, cost)]


def value_functional(sigma: TreeSimplex, d: GroundMetric, normalize: bool = True) -> AffineForm:
    """``(mu, nu) -> sum d_ij * pi_ij`` on ``sigma``.

    With ``normalize`` the form is reduced with ``sum mu = sum nu = 1`` (the last
    coordinates are eliminated), which makes equal functionals compare equal.
    """
    total = AffineForm(0)
    for (i, j), form in solve_tree(sigma).items():
        if d.cost[i][j]:
            total = total + form * d.cost[i][j]
    return total.normalized(sigma.n) if normalize else total


def coarsen(t: Triangulation) -> list[SubdivisionCell]:
    """Group simplices whose value functionals coincide: cells of the unperturbed subdivision."""
    groups: dict[AffineForm, list[TreeSimplex]] = {}
    for sigma in t.simplices:
        groups.setdefault(value_functional(sigma, t.metric), []).append(sigma)
    return [SubdivisionCell(tuple(members), form) for form, members in groups.items()]


def ideal_components(t: Triangulation) -> list[list[tuple[int, int]]]:
    """1-based generator index pairs of each prime component, per simplex."""
    return [[(i + 1, j + 1) for i, j in s.complement()] for s in t.simplices]


def format_component(gens) -> str:
    return "⟨" + ",".join(f"y_{{{i}{j}}}" for i, j in gens) + "⟩"


def to_monomial_ideal(t: Triangulation) -> str:
    """Prime decomposition of the Stanley-Reisner ideal, one component per line."""
    return " ∩\n".join(format_component(g) for g in ideal_components(t))


@dataclass(frozen=True)
class CycleInequality:
    """Strict inequality ``sum coeffs[(i,j)] * d_ij > 0`` (1-based index pairs)."""

    coeffs: tuple[tuple[tuple[int, int], int], ...]

    def evaluate(self, cost) -> Fraction:
        return sum((Fraction(cost[i - 1][j - 1]) * c for (i, j), c in self.coeffs), Fraction(0))

    def holds(self, cost) -> bool:
        return self.evaluate(cost) > 0

    def __str__(self):
        def side(terms):
            return " + ".join(f"d_{{{i}{j}}}" if c == 1 else f"{c}*d_{{{i}{j}}}" for (i, j), c in terms) or "0"
        pos = [(e, c) for e, c in self.coeffs if c > 0]
        neg = [(e, -c) for e, c in self.coeffs if c < 0]
        return f"{side(pos)} > {side(neg)}"

    def to_json(self) -> dict:
        return {"coefficients": [[i, j, c] for (i, j), c in self.coeffs], "text": str(self)}


def secondary_cone(t: Triangulation) -> list[CycleInequality]:
    """Deduplicated cycle inequalities cutting out the open secondary cone."""
    seen = set()
    out = []
    for sigma in t.simplices:
        for e in sigma.complement():
            signs = cycle_signs(sigma, e)
            key = tuple(sorted(((i + 1, j + 1), s) for (i, j), s in signs.items()))
            if key not in seen:
                seen.add(key)
                out.append(CycleInequality(key))
    out.sort(key=lambda q: (len(q.coeffs), q.coeffs))
    return out


def in_secondary_cone(inequalities, cost) -> bool:
    return all(q.holds(cost) for q in inequalities)


def reduced_cost_of(sigma: TreeSimplex, d: GroundMetric, edge: tuple[int, int]) -> Fraction:
    """Reduced cost of a non-tree edge (0-based) with respect to the unperturbed metric."""
    return reduced_cost(sigma, d.cost, edge)
