"""Distance from a distribution to a model: iterate cells, minimize, merge."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cells import CellProblem, cell_problem
from .errors import CapabilityError, NumericInfeasibleError, ValidationError
from .exact import QuadraticNumber
from .forms import Polynomial
from .models import ImplicitCurveModel, ParametricModel, compose_cell
from .optimize import (
    Candidate,
    NumericConfig,
    _key,
    _simplify,
    best_candidates,
    minimize_cell_exact,
    minimize_cell_numeric,
)
from .transport import Distribution, GroundMetric, TransportPlan
from .triangulation import Triangulation, regular_triangulation

ENGINES = ("exact", "numeric")
NUMERIC_TIE_TOL = 1e-9


@dataclass
class CellReport:
    cell_id: int
    cell: CellProblem
    objective: Polynomial | None
    constraints: list[Polynomial]
    status: str  # "feasible" | "infeasible"
    engine: str  # "exact" | "numeric"
    candidates: list[Candidate] = field(default_factory=list)
    minimum: object = None
    minimizers: list[tuple] = field(default_factory=list)
    fallback_reason: str | None = None

    @property
    def fallback(self) -> bool:
        return self.fallback_reason is not None

    @property
    def exact(self) -> bool:
        return self.engine == "exact"


@dataclass
class PiecewiseReport:
    rows: list[CellReport]
    simplex_count: int
    perturbed: bool

    def row(self, cell_id: int) -> CellReport:
        return self.rows[cell_id - 1]


@dataclass
class Optimum:
    value: object
    value_float: float
    exact: bool
    theta_star: list[tuple]
    nu_star: list[tuple]
    cell_ids: list[int]
    plan: TransportPlan
    heuristic: bool


def _as_distribution(mu) -> Distribution:
    return mu if isinstance(mu, Distribution) else Distribution(tuple(mu))


def _minimize_row(row: CellReport, bounds, engine: str, config: NumericConfig):
    if engine == "exact":
        try:
            cands = minimize_cell_exact(row.objective, row.constraints, bounds)
        except CapabilityError as exc:
            row.fallback_reason = str(exc)
        else:
            row.candidates = cands
            value, winners = best_candidates(cands)
            if value is None:
                row.status = "infeasible"
            else:
                row.minimum = value
                row.minimizers = [w.theta for w in winners]
            return
    row.engine = "numeric"
    try:
        res = minimize_cell_numeric(row.objective, row.constraints, bounds, config)
    except NumericInfeasibleError:
        row.status = "infeasible"
        return
    row.minimum = res.value
    row.minimizers = list(res.minimizers)


def _float(x) -> float:
    return float(x)


def model_distance(d: GroundMetric, mu, model: ParametricModel, engine: str = "exact",
                   config: NumericConfig | None = None,
                   triangulation: Triangulation | None = None) -> tuple[Optimum, PiecewiseReport]:
    """Minimum of ``W(mu, nu)`` over ``nu`` in the image of ``model``.

    Every cell of the triangulation induced by ``d`` is minimized separately.
    Cells the exact engine cannot handle are redone numerically and flagged.
    """
    if engine not in ENGINES:
        raise ValidationError(f"unknown engine {engine!r}")
    if isinstance(model, ImplicitCurveModel):
        return implicit_model_distance(d, mu, model, config)
    mu = _as_distribution(mu)
    if not (d.n == mu.n == model.n):
        raise ValidationError(
            f"dimension mismatch: metric n={d.n}, mu has {mu.n} entries, model has {model.n} coordinates")
    cfg = config or NumericConfig()
    t = triangulation or regular_triangulation(d)
    rows = []
    for idx, sigma in enumerate(t.simplices, start=1):
        cell = cell_problem(sigma, mu, d, idx)
        if cell.infeasible:
            rows.append(CellReport(idx, cell, None, [], "infeasible", engine))
            continue
        objective, constraints = compose_cell(model, cell)
        row = CellReport(idx, cell, objective, constraints, "feasible", engine)
        _minimize_row(row, model.bounds, engine, cfg)
        rows.append(row)
    report = PiecewiseReport(rows, len(t.simplices), t.perturbed)
    return _merge(rows, model), report


def _merge(rows: list[CellReport], model: ParametricModel) -> Optimum:
    live = [r for r in rows if r.status == "feasible" and r.minimum is not None]
    if not live:
        raise NumericInfeasibleError("no cell of the triangulation meets the model")
    best_f = min(_float(r.minimum) for r in live)
    attaining = [r for r in live if _float(r.minimum) <= best_f + NUMERIC_TIE_TOL]
    exact = all(r.exact for r in attaining)
    if exact:
        value = min((r.minimum for r in attaining), key=lambda v: QuadraticNumber._coerce(v).to_decimal(50))
        attaining = [r for r in attaining if QuadraticNumber._coerce(r.minimum).compare(value) == 0]
        thetas: dict = {}
        for r in attaining:
            for th in r.minimizers:
                thetas.setdefault(tuple(_key(x) for x in th), th)
        theta_star = sorted(thetas.values(), key=lambda th: tuple(float(x) for x in th))
        nu_star = [tuple(_simplify(x) for x in model(th)) for th in theta_star]
    else:
        value = best_f
        thetas = {}
        for r in attaining:
            for th in r.minimizers:
                thetas.setdefault(tuple(round(float(x), 7) for x in th), tuple(float(x) for x in th))
        theta_star = sorted(thetas.values())
        nu_star = [model.evaluate_float(th) for th in theta_star]
    plan = _plan_at(attaining[0].cell, nu_star[0], exact)
    return Optimum(value, float(value), exact, theta_star, nu_star,
                   [r.cell_id for r in attaining], plan, not exact)


def _plan_at(cell: CellProblem, nu: Sequence, exact: bool) -> TransportPlan:
    entries = cell.template.evaluate(nu)
    if exact:
        entries = [[_simplify(x) for x in r] for r in entries]
    else:
        entries = [[0.0 if abs(float(x)) < 1e-12 else float(x) for x in r] for r in entries]
    return TransportPlan(tuple(tuple(r) for r in entries))


# -- implicit curves ---------------------------------------------------------

def _cell_values(cells: list[CellProblem], X: np.ndarray) -> np.ndarray:
    """``W(mu, x)`` for each row ``x`` of ``X``: the objective of any cell containing ``x``."""
    out = np.full(X.shape[0], np.nan)
    for cell in cells:
        if cell.infeasible:
            continue
        ok = np.ones(X.shape[0], dtype=bool)
        for g in cell.active_constraints:
            ok &= _affine_float(g, X) >= -1e-12
        todo = ok & np.isnan(out)
        if todo.any():
            out[todo] = _affine_float(cell.objective, X[todo])
    return out


def _affine_float(form, X: np.ndarray) -> np.ndarray:
    v = np.full(X.shape[0], float(form.constant))
    for name, c in form.coeffs.items():
        v += float(c) * X[:, int(name[2:]) - 1]
    return v


def implicit_model_distance(d: GroundMetric, mu, model: ImplicitCurveModel,
                            config: NumericConfig | None = None) -> tuple[Optimum, PiecewiseReport]:
    """Numeric distance to a curve ``{f = 0}`` in the triangle (three states only)."""
    from .dual import curve_points

    mu = _as_distribution(mu)
    if d.n != 3 or mu.n != 3:
        raise CapabilityError("implicit curve models are supported for n = 3 only")
    t = regular_triangulation(d)
    cells = [cell_problem(s, mu, d, i) for i, s in enumerate(t.simplices, start=1)]
    pts = curve_points(model.f, 2001, 400)
    if not pts:
        raise NumericInfeasibleError("curve misses the simplex (numerically)")
    X = np.array(pts)
    vals = _cell_values(cells, X)
    i = int(np.nanargmin(vals))
    x_best = _refine_curve_point(model.f, cells, X[i], float(vals[i]))
    v = float(_cell_values(cells, x_best[None, :])[0])
    attaining = [c.cell_id for c in cells if not c.infeasible
                 and all(_affine_float(g, x_best[None, :])[0] >= -1e-9 for g in c.active_constraints)
                 and abs(_affine_float(c.objective, x_best[None, :])[0] - v) <= NUMERIC_TIE_TOL]
    rows = [CellReport(c.cell_id, c, None, [], "infeasible" if c.infeasible else "feasible", "numeric")
            for c in cells]
    for r in rows:
        if r.cell_id in attaining:
            r.minimum = v
            r.minimizers = [tuple(float(x) for x in x_best)]
    plan = _plan_at(cells[attaining[0] - 1] if attaining else cells[0], tuple(x_best), False)
    nu = tuple(float(x) for x in x_best)
    opt = Optimum(v, v, False, [nu], [nu], attaining, plan, True)
    return opt, PiecewiseReport(rows, len(t.simplices), t.perturbed)


def _refine_curve_point(f: Polynomial, cells, x0: np.ndarray, v0: float) -> np.ndarray:
    """Golden-section search along the curve, parametrized by the slice height ``x3``."""
    from scipy.optimize import brentq, minimize_scalar

    def point_at(t, guess):
        width = 1.0 - t
        h = lambda x1: f.evaluate_float((x1, width - x1, t))  # noqa: E731
        lo, hi = max(0.0, guess - 5e-3), min(width, guess + 5e-3)
        if not (0.0 <= lo < hi) or h(lo) * h(hi) > 0:
            return None
        r = brentq(h, lo, hi, xtol=1e-15)
        return np.array([r, width - r, t])

    def value(t):
        p = point_at(t, x0[0])
        if p is None:
            return np.inf
        w = _cell_values(cells, p[None, :])[0]
        return np.inf if np.isnan(w) else float(w)

    t0 = float(x0[2])
    h = 1e-3
    res = minimize_scalar(value, bracket=None, bounds=(max(0.0, t0 - h), min(1.0, t0 + h)),
                          method="bounded", options={"xatol": 1e-13})
    if np.isfinite(res.fun) and res.fun <= v0:
        p = point_at(res.x, x0[0])
        if p is not None:
            return p
    return x0
