"""Per-cell minimization of a polynomial over a box cut by polynomial inequalities.

Two engines:

* :func:`minimize_cell_exact` enumerates a finite candidate set that provably
  contains a constrained minimizer, for one or two parameters and total degree
  at most two.  Candidates are rationals or ``a + b*sqrt(c)`` numbers.
* :func:`minimize_cell_numeric` scans a grid and polishes the best points with
  SLSQP.  It is a heuristic with no global guarantee.

Two-parameter candidates come from a decomposition of every constraint curve
(box edges included) into vertical lines ``theta_a = r`` and graphs
``A(t) s + B(t) = 0``; the exact engine therefore needs each constraint to be
at most linear in one of the two parameters.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import CapabilityError, NumericInfeasibleError
from .exact import QuadraticNumber
from .forms import Polynomial

EXACT_MAX_PARAMS = 2
EXACT_MAX_DEGREE = 2

INTERIOR = "interior-critical"
BOUNDARY = "boundary"
CORNER = "corner"


@dataclass(frozen=True)
class Candidate:
    theta: tuple
    value: object
    provenance: str
    feasible: bool
    source: str = ""

    def value_float(self) -> float:
        return float(self.value)

    def theta_float(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.theta)


def _simplify(x):
    if isinstance(x, QuadraticNumber) and x.is_rational:
        return x.a
    return x


def _key(x):
    x = _simplify(x)
    if isinstance(x, QuadraticNumber):
        return (x.a, x.b, x.c)
    return (Fraction(x), Fraction(0), Fraction(0))


# -- univariate helpers (coefficient lists, lowest degree first) -------------

def _trim(c: list) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _uadd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _uneg(a: list) -> list:
    return [-x for x in a]


def _umul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = x * y + out[i + j]
    return _trim(out)


def _uscale(a: list, s) -> list:
    return _trim([x * s for x in a])


def _upow(a: list, k: int) -> list:
    out = [Fraction(1)]
    for _ in range(k):
        out = _umul(out, a)
    return out


def _uderiv(a: list) -> list:
    return _trim([a[i] * i for i in range(1, len(a))])


def _ueval(a: list, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return _simplify(acc)


def _udivmod(a: list, b: list) -> tuple[list, list]:
    a = _trim(a)
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / b[-1]
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] -= c * y
        r = _trim(r[:-1]) if r[-1] == 0 else _trim(r)
    return _trim(q), r


def _ugcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [x / a[-1] for x in a]


def _is_rational_poly(a: list) -> bool:
    return all(not isinstance(x, QuadraticNumber) or x.is_rational for x in a)


def _squarefree(a: list) -> list:
    if len(a) <= 2 or not _is_rational_poly(a):
        return a
    a = [Fraction(_simplify(x)) for x in a]
    g = _ugcd(a, _uderiv(a))
    if len(g) > 1:
        a, _ = _udivmod(a, g)
    return a


def _strip_common(a: list, b: list) -> list:
    """Divide out of ``a`` every factor it shares with ``b`` (rational case)."""
    if not _is_rational_poly(a) or not _is_rational_poly(b) or not b:
        return a
    a = [Fraction(_simplify(x)) for x in a]
    b = [Fraction(_simplify(x)) for x in b]
    while True:
        g = _ugcd(a, b)
        if len(g) <= 1:
            return a
        a, _ = _udivmod(a, g)


def real_roots(coeffs: Sequence) -> list:
    """Distinct real roots of a polynomial of degree at most two, or of one
    that splits over Q into factors of degree at most two.

    Coefficients may be rationals or QuadraticNumbers; a quadratic with
    irrational coefficients is only solved when its discriminant is rational
    and the result stays in one quadratic field.
    """
    c = _squarefree(_trim([_simplify(x) for x in coeffs]))
    deg = len(c) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [_simplify(-QuadraticNumber._coerce(c[0]) / c[1])]
    if deg > 2:
        if not _is_rational_poly(c):
            raise CapabilityError(f"univariate polynomial of degree {deg} exceeds the exact engine")
        out = []
        for factor in _rational_factors([Fraction(_simplify(x)) for x in c]):
            out.extend(real_roots(factor))
        return sorted(out, key=_sort_key)
    a, b, k = c[2], c[1], c[0]
    disc = _simplify(QuadraticNumber._coerce(b) * b - QuadraticNumber._coerce(a) * k * 4)
    if isinstance(disc, QuadraticNumber):
        raise CapabilityError("nested radical in a quadratic root")
    if disc < 0:
        return []
    two_a = QuadraticNumber._coerce(a) * 2
    if disc == 0:
        return [_simplify(-QuadraticNumber._coerce(b) / two_a)]
    root = QuadraticNumber.sqrt(disc)
    try:
        out = [_simplify((-QuadraticNumber._coerce(b) + s * root) / two_a) for s in (-1, 1)]
    except ValueError as exc:
        raise CapabilityError(f"root needs two radicands: {exc}") from exc
    return sorted(out, key=_sort_key)


def _rational_factors(c: list[Fraction]) -> list[list[Fraction]]:
    """Irreducible factors over Q; any factor of degree > 2 is out of reach."""
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(x.numerator, x.denominator) for x in reversed(c)], t, domain="QQ")
    out = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() > 2:
            raise CapabilityError(f"irreducible factor of degree {fac.degree()} exceeds the exact engine")
        out.append([Fraction(int(x.p), int(x.q)) for x in reversed(fac.all_coeffs())])
    return out


def _sort_key(x):
    return QuadraticNumber._coerce(x).to_decimal(50)


def _univariate(poly: Polynomial) -> list:
    return _trim(poly.univariate_coeffs()) if not poly.is_zero() else []


def _coeffs_in(poly: Polynomial, name: str) -> dict[int, list]:
    """``poly`` as ``sum_k coeff_k(t) * name**k`` with univariate coefficient lists."""
    return {k: _univariate(c) for k, c in poly.coefficients_in(name).items()}


# -- curve pieces ----------------------------------------------------------

@dataclass(frozen=True)
class VLine:
    axis: int
    value: object
    label: str


@dataclass(frozen=True)
class Graph:
    """Points ``s = -B(t)/A(t)`` with ``A(t) != 0``; ``t`` and ``s`` are axes."""

    t: int
    s: int
    A: tuple
    B: tuple
    label: str


def _pieces(g: Polynomial, label: str) -> list:
    names = g.variables
    for s_axis in (1, 0):
        t_axis = 1 - s_axis
        if g.degree_in(names[s_axis]) > 1:
            continue
        parts = _coeffs_in(g, names[s_axis])
        A = parts.get(1, [])
        B = parts.get(0, [])
        out = []
        if not A:
            return [VLine(t_axis, r, label) for r in real_roots(B)]
        G = _ugcd(A, B) if B else list(A)
        if len(G) > 1:
            out.extend(VLine(t_axis, r, label) for r in real_roots(G))
            A, _ = _udivmod(A, G)
            B, _ = _udivmod(B, G) if B else ([], [])
        out.append(Graph(t_axis, s_axis, tuple(A), tuple(B), label))
        return out
    raise CapabilityError(f"constraint {g} is quadratic in both parameters")


def _graph_point(pc: Graph, t):
    a = _ueval(list(pc.A), t)
    if a == 0:
        return None
    s = _simplify(-QuadraticNumber._coerce(_ueval(list(pc.B), t)) / a)
    pt = [None, None]
    pt[pc.t] = _simplify(t)
    pt[pc.s] = s
    return tuple(pt)


def _restricted_stationary(f: Polynomial, pc) -> list[tuple]:
    names = f.variables
    if isinstance(pc, VLine):
        other = 1 - pc.axis
        parts = f.coefficients_in(names[other])
        coeffs = [Fraction(0)] * (max(parts) + 1 if parts else 0)
        for k, c in parts.items():
            coeffs[k] = _simplify(c.evaluate([pc.value]))
        out = []
        for r in real_roots(_uderiv(_trim(coeffs))):
            pt = [None, None]
            pt[pc.axis] = pc.value
            pt[other] = r
            out.append(tuple(pt))
        return out
    parts = _coeffs_in(f, names[pc.s])
    m = max(parts) if parts else 0
    A, B = list(pc.A), list(pc.B)
    N: list = []
    for k, fk in parts.items():
        N = _uadd(N, _umul(fk, _umul(_upow(_uneg(B), k), _upow(A, m - k))))
    D = _uadd(_umul(_uderiv(N), A), _uneg(_uscale(_umul(N, _uderiv(A)), m)))
    D = _strip_common(D, A)
    if not D:
        return []
    return [p for p in (_graph_point(pc, t) for t in real_roots(D)) if p is not None]


def _compose_rational(poly_in_s: list, pc: Graph) -> list:
    """``A**d * P(-B/A)`` for a univariate ``P`` of degree ``d``."""
    A, B = list(pc.A), list(pc.B)
    d = len(poly_in_s) - 1
    out: list = []
    for k, c in enumerate(poly_in_s):
        if c:
            out = _uadd(out, _uscale(_umul(_upow(_uneg(B), k), _upow(A, d - k)), c))
    return out


def _intersect(p1, p2) -> list[tuple]:
    if isinstance(p1, VLine) and isinstance(p2, VLine):
        if p1.axis == p2.axis:
            return []
        pt = [None, None]
        pt[p1.axis] = p1.value
        pt[p2.axis] = p2.value
        return [tuple(pt)]
    if isinstance(p2, VLine):
        p1, p2 = p2, p1
    if isinstance(p1, VLine):
        g = p2
        if p1.axis == g.t:
            p = _graph_point(g, p1.value)
            return [p] if p is not None else []
        eq = _uadd(_uscale(list(g.A), p1.value), list(g.B))
        eq = _strip_common(eq, list(g.A))
        return [p for p in (_graph_point(g, t) for t in real_roots(eq)) if p is not None]
    g1, g2 = p1, p2
    if g1.t == g2.t:
        eq = _uadd(_umul(list(g1.A), list(g2.B)), _uneg(_umul(list(g2.A), list(g1.B))))
        if not eq:
            return []
        eq = _strip_common(_strip_common(eq, list(g1.A)), list(g2.A))
        pts = []
        for t in real_roots(eq):
            if _ueval(list(g2.A), t) != 0:
                p = _graph_point(g1, t)
                if p is not None:
                    pts.append(p)
        return pts
    # g2 is A2(u) v + B2(u) with u = g1's s-axis; substitute u = -B1(t)/A1(t)
    a2 = _compose_rational(list(g2.A), g1)
    b2 = _compose_rational(list(g2.B), g1)
    da, db = len(g2.A) - 1, len(g2.B) - 1
    d = max(da, db)
    # bring both to the common power A1**d, then require a2' * t + b2' = 0
    a2 = _umul(a2, _upow(list(g1.A), d - da)) if g2.A else []
    b2 = _umul(b2, _upow(list(g1.A), d - db)) if g2.B else []
    eq = _uadd(_umul(a2, [Fraction(0), Fraction(1)]), b2)
    if not eq:
        return []
    eq = _strip_common(eq, list(g1.A))
    return [p for p in (_graph_point(g1, t) for t in real_roots(eq)) if p is not None]


# -- exact engine ----------------------------------------------------------

def _box_constraints(variables, bounds) -> list[tuple[Polynomial, str]]:
    out = []
    for v, (lo, hi) in zip(variables, bounds):
        x = Polynomial.var(variables, v)
        out.append((x - lo, f"{v}={lo}"))
        out.append((hi - x, f"{v}={hi}"))
    return out


def _check_exact_capability(objective: Polynomial, constraints: Sequence[Polynomial]):
    k = len(objective.variables)
    if k < 1 or k > EXACT_MAX_PARAMS:
        raise CapabilityError(f"exact engine supports 1 or 2 parameters, got {k}")
    for p in (objective, *constraints):
        if p.degree() > EXACT_MAX_DEGREE:
            raise CapabilityError(f"exact engine supports total degree <= 2, got {p.degree()}")


def _is_feasible(theta, constraints, bounds) -> bool:
    for x, (lo, hi) in zip(theta, bounds):
        if x < lo or x > hi:
            return False
    return all(g.evaluate(list(theta)) >= 0 for g in constraints)


def _candidate_points_1d(objective, constraints, bounds):
    lo, hi = bounds[0]
    yield (lo,), CORNER, "endpoint"
    yield (hi,), CORNER, "endpoint"
    for r in real_roots(_univariate(objective.diff(objective.variables[0]))):
        yield (r,), INTERIOR, "f'=0"
    for idx, g in enumerate(constraints):
        for r in real_roots(_univariate(g)):
            yield (r,), BOUNDARY, f"g{idx + 1}=0"


def _interior_2d(objective: Polynomial):
    p, q = objective.variables
    fp, fq = objective.diff(p), objective.diff(q)

    def lin(h):
        return (h.terms.get((1, 0), Fraction(0)), h.terms.get((0, 1), Fraction(0)),
                h.terms.get((0, 0), Fraction(0)))

    a, b, e = lin(fp)
    c, d, f = lin(fq)
    det = a * d - b * c
    if det == 0:
        return []
    return [((b * f - d * e) / det, (c * e - a * f) / det)]


def _candidate_points_2d(objective, constraints, bounds):
    for pt in _interior_2d(objective):
        yield pt, INTERIOR, "grad f=0"
    curves = [(g, f"g{i + 1}") for i, g in enumerate(constraints)]
    curves += _box_constraints(objective.variables, bounds)
    pieces = []
    for g, label in curves:
        pieces.extend(_pieces(g, label))
    for pc in pieces:
        for pt in _restricted_stationary(objective, pc):
            yield pt, BOUNDARY, f"stationary on {pc.label}"
    for p1, p2 in itertools.combinations(pieces, 2):
        for pt in _intersect(p1, p2):
            yield pt, CORNER, f"{p1.label} meets {p2.label}"


def minimize_cell_exact(objective: Polynomial, constraints: Sequence[Polynomial],
                        bounds: Sequence[tuple]) -> list[Candidate]:
    """Every candidate minimizer, feasible or not, in a canonical order.

    The feasible candidates always include a global minimizer of ``objective``
    over ``{theta in box : g(theta) >= 0 for all g}`` when that set is nonempty.
    """
    constraints = list(constraints)
    _check_exact_capability(objective, constraints)
    bounds = [(Fraction(lo), Fraction(hi)) for lo, hi in bounds]
    k = len(objective.variables)
    gen = _candidate_points_1d if k == 1 else _candidate_points_2d
    seen = {}
    try:
        for theta, prov, src in gen(objective, constraints, bounds):
            theta = tuple(_simplify(x) for x in theta)
            key = tuple(_key(x) for x in theta)
            if key in seen:
                continue
            feasible = _is_feasible(theta, constraints, bounds)
            value = _simplify(objective.evaluate(list(theta)))
            seen[key] = Candidate(theta, value, prov, feasible, src)
    except ValueError as exc:
        raise CapabilityError(f"candidate outside a single quadratic field: {exc}") from exc
    return sorted(seen.values(), key=lambda c: tuple(_sort_key(x) for x in c.theta))


def best_candidates(cands: Sequence[Candidate]) -> tuple[object, list[Candidate]]:
    """Minimum value over feasible candidates and every candidate attaining it."""
    feas = [c for c in cands if c.feasible]
    if not feas:
        return None, []
    best = min(feas, key=lambda c: QuadraticNumber._coerce(c.value).to_decimal(50))
    winners = [c for c in feas if QuadraticNumber._coerce(c.value).compare(best.value) == 0]
    return best.value, winners


def feasible_intervals(constraints: Sequence[Polynomial], bounds) -> list[tuple]:
    """Maximal closed intervals of the one-parameter feasible set, endpoints exact."""
    lo, hi = (Fraction(b) for b in bounds[0])
    pts = {_key(lo): lo, _key(hi): hi}
    for g in constraints:
        for r in real_roots(_univariate(g)):
            if lo <= r <= hi:
                pts[_key(r)] = r
    xs = sorted(pts.values(), key=_sort_key)

    def ok(x):
        return all(g.evaluate([x]) >= 0 for g in constraints)

    out: list[list] = []
    for i, x in enumerate(xs):
        if ok(x):
            if out and out[-1][1] is xs[i - 1] and _gap_ok(xs[i - 1], x, ok):
                out[-1][1] = x
            else:
                out.append([x, x])
    return [tuple(iv) for iv in out]


def _gap_ok(a, b, ok) -> bool:
    mid = (Fraction(float(a)) + Fraction(float(b))) / 2
    return ok(mid)


# -- numeric engine --------------------------------------------------------

@dataclass(frozen=True)
class NumericConfig:
    grid: int = 512
    tol: float = 1e-10
    max_grid_points: int = 300_000
    refine_starts: int = 8
    feasibility_slack: float = 1e-12


@dataclass(frozen=True)
class NumericResult:
    theta: tuple[float, ...]
    value: float
    heuristic: bool = True
    minimizers: tuple[tuple[float, ...], ...] = field(default=())


def _vectorized(poly: Polynomial):
    terms = [(float(c), e) for e, c in poly.terms.items()]

    def f(X):
        out = np.zeros(X.shape[0])
        for c, e in terms:
            t = np.full(X.shape[0], c)
            for i, k in enumerate(e):
                if k:
                    t = t * X[:, i] ** k
            out += t
        return out
    return f


def _grid(bounds, per_axis: int) -> np.ndarray:
    axes = []
    for lo, hi in bounds:
        lo, hi = float(lo), float(hi)
        axes.append(np.array([(lo + hi) / 2]) if per_axis == 1 or lo == hi else np.linspace(lo, hi, per_axis))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def minimize_cell_numeric(objective: Polynomial, constraints: Sequence[Polynomial],
                          bounds: Sequence[tuple], config: NumericConfig | None = None) -> NumericResult:
    cfg = config or NumericConfig()
    k = len(objective.variables)
    per_axis = cfg.grid
    while per_axis > 2 and per_axis ** k > cfg.max_grid_points:
        per_axis = int(per_axis * 0.8)
    X = _grid(bounds, per_axis)
    fv = _vectorized(objective)
    gvs = [_vectorized(g) for g in constraints]
    mask = np.ones(X.shape[0], dtype=bool)
    for gv in gvs:
        mask &= gv(X) >= -cfg.feasibility_slack
    if not mask.any():
        raise NumericInfeasibleError("cell numerically infeasible")
    Xf = X[mask]
    vals = fv(Xf)
    order = np.argsort(vals, kind="stable")[: cfg.refine_starts]

    fl = [(float(lo), float(hi)) for lo, hi in bounds]
    grads = [objective.diff(v) for v in objective.variables]

    def fun(x):
        return objective.evaluate_float(x)

    def jac(x):
        return np.array([g.evaluate_float(x) for g in grads])

    cons = []
    for g in constraints:
        dg = [g.diff(v) for v in g.variables]
        cons.append({
            "type": "ineq",
            "fun": (lambda x, g=g: g.evaluate_float(x)),
            "jac": (lambda x, dg=dg: np.array([h.evaluate_float(x) for h in dg])),
        })

    def feasible(x):
        return (all(lo - 1e-12 <= xi <= hi + 1e-12 for xi, (lo, hi) in zip(x, fl))
                and all(g.evaluate_float(x) >= -1e-10 for g in constraints))

    best_x = Xf[order[0]]
    best_v = float(vals[order[0]])
    for idx in order:
        x0 = Xf[idx]
        res = minimize(fun, x0, jac=jac, bounds=fl, constraints=cons, method="SLSQP",
                       options={"ftol": 1e-16, "maxiter": 500})
        x = np.clip(res.x, [lo for lo, _ in fl], [hi for _, hi in fl])
        v = fun(x)
        if feasible(x) and v < best_v - 1e-15:
            best_x, best_v = x, v
    best_x = _polish(objective, constraints, fl, np.asarray(best_x, dtype=float), cfg.tol)
    return NumericResult(tuple(float(t) for t in best_x), fun(best_x), True, (tuple(float(t) for t in best_x),))


def _polish(objective: Polynomial, constraints, fl, x: np.ndarray, tol: float) -> np.ndarray:
    """Newton steps on the KKT system of the constraints active at ``x``."""
    names = objective.variables
    k = len(names)
    active = [g for g in constraints if abs(g.evaluate_float(x)) < 1e-7]
    for i, (lo, hi) in enumerate(fl):
        for b in (lo, hi):
            if abs(x[i] - b) < 1e-9:
                x = x.copy()
                x[i] = b
                active.append(Polynomial.var(names, names[i]) - Fraction(b))
    active = active[:k]
    grad = [objective.diff(v) for v in names]
    hess = [[g.diff(v) for v in names] for g in grad]
    agrad = [[g.diff(v) for v in names] for g in active]
    ahess = [[[h.diff(v) for v in names] for h in row] for row in agrad]
    m = len(active)
    lam = np.zeros(m)
    if m:
        J = np.array([[h.evaluate_float(x) for h in row] for row in agrad])
        gf = np.array([h.evaluate_float(x) for h in grad])
        lam, *_ = np.linalg.lstsq(J.T, gf, rcond=None)
    z = np.concatenate([x, lam])
    for _ in range(30):
        xx, ll = z[:k], z[k:]
        J = np.array([[h.evaluate_float(xx) for h in row] for row in agrad]).reshape(m, k)
        F1 = np.array([h.evaluate_float(xx) for h in grad]) - J.T @ ll
        F2 = np.array([g.evaluate_float(xx) for g in active])
        F = np.concatenate([F1, F2])
        H = np.array([[h.evaluate_float(xx) for h in row] for row in hess])
        for a in range(m):
            H -= ll[a] * np.array([[h.evaluate_float(xx) for h in row] for row in ahess[a]])
        K = np.block([[H, -J.T], [J, np.zeros((m, m))]])
        try:
            step = np.linalg.solve(K, -F)
        except np.linalg.LinAlgError:
            break
        z = z + step
        if np.max(np.abs(step[:k])) < tol * 1e-3:
            break
    xn = z[:k]
    ok = (np.all(np.isfinite(xn)) and np.max(np.abs(xn - x)) < 1e-4
          and all(lo - 1e-12 <= xi <= hi + 1e-12 for xi, (lo, hi) in zip(xn, fl))
          and all(g.evaluate_float(xn) >= -1e-12 for g in constraints)
          and objective.evaluate_float(xn) <= objective.evaluate_float(x) + 1e-8)
    return np.clip(xn, [lo for lo, _ in fl], [hi for _, hi in fl]) if ok else x
