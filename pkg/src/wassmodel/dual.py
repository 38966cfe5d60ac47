"""Linear optimization over an implicit plane cubic, and its algebraic certificate.

``PHI`` is the homogeneous sextic whose zero set, at ``c0 = -(optimal value)``,
certifies critical values of ``c . x`` on the curve
``x1^3 + x2^3 + x3^3 = 4 x1 x2 x3``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, fsolve, minimize

from .errors import NumericInfeasibleError, ValidationError
from .forms import Polynomial
from .models import ImplicitCurveModel


def _elliptic_cubic() -> Polynomial:
    x1, x2, x3 = Polynomial.gens(("x1", "x2", "x3"))
    return x1 ** 3 + x2 ** 3 + x3 ** 3 - 4 * x1 * x2 * x3


ELLIPTIC_CUBIC = _elliptic_cubic()


def _sextic() -> Polynomial:
    c0, c1, c2, c3 = Polynomial.gens(("c0", "c1", "c2", "c3"))
    e4 = (65 * c1**2 - 70 * c1 * c2 - 70 * c1 * c3 + 65 * c2**2 - 70 * c2 * c3 + 65 * c3**2)
    e3 = (208 * c1**3 - 442 * c1**2 * c2 - 442 * c1**2 * c3 - 442 * c1 * c2**2
          + 2048 * c1 * c2 * c3 - 442 * c1 * c3**2 + 208 * c2**3 - 442 * c2**2 * c3
          - 442 * c2 * c3**2 + 208 * c3**3)
    e2 = (117 * c1**4 - 546 * c1**3 * c2 - 546 * c1**3 * c3 + 1994 * c1**2 * c2**2
          - 1024 * c1**2 * c2 * c3 + 1994 * c1**2 * c3**2 - 546 * c1 * c2**3
          - 1024 * c1 * c2**2 * c3 - 1024 * c1 * c2 * c3**2 - 546 * c1 * c3**3
          + 117 * c2**4 - 546 * c2**3 * c3 + 1994 * c2**2 * c3**2 - 546 * c2 * c3**3
          + 117 * c3**4)
    e1 = (162 * c1**5 - 288 * c1**4 * c2 - 288 * c1**4 * c3 + 606 * c1**3 * c2**2
          - 1152 * c1**3 * c2 * c3 + 606 * c1**3 * c3**2 + 606 * c1**2 * c2**3
          + 352 * c1**2 * c2**2 * c3 + 352 * c1**2 * c2 * c3**2 + 606 * c1**2 * c3**3
          - 288 * c1 * c2**4 - 1152 * c1 * c2**3 * c3 + 352 * c1 * c2**2 * c3**2
          - 1152 * c1 * c2 * c3**3 - 288 * c1 * c3**4 + 162 * c2**5 - 288 * c2**4 * c3
          + 606 * c2**3 * c3**2 + 606 * c2**2 * c3**3 - 288 * c2 * c3**4 + 162 * c3**5)
    e0 = (-27 * c1**6 + 288 * c1**4 * c2 * c3 - 202 * c1**3 * c2**3 - 202 * c1**3 * c3**3
          - 176 * c1**2 * c2**2 * c3**2 + 288 * c1 * c2**4 * c3 + 288 * c1 * c2 * c3**4
          - 27 * c2**6 - 202 * c2**3 * c3**3 - 27 * c3**6)
    return (c0**6 + (2 * c1 + 2 * c2 + 2 * c3) * c0**5 - e4 * c0**4 + e3 * c0**3
            - e2 * c0**2 - e1 * c0 + e0)


PHI = _sextic()


def dual_residual(c0, c) -> float:
    """``PHI(-c0, c1, c2, c3)``: zero when ``c0`` is a critical value of ``c . x`` on the cubic."""
    c1, c2, c3 = c
    return PHI.evaluate_float((-float(c0), float(c1), float(c2), float(c3)))


def dual_residual_exact(c0, c):
    """Same as :func:`dual_residual` over the rationals."""
    return PHI.evaluate([-c0, *c])


def wasserstein_degree_hypersurface(m: int, n: int) -> int:
    """Generic algebraic degree of the optimal value for a degree-``m`` hypersurface in ``Delta_{n-1}``."""
    if m < 1 or n < 2:
        raise ValidationError(f"need m >= 1 and n >= 2, got m={m}, n={n}")
    return m * (m - 1) ** (n - 2)


@dataclass(frozen=True)
class CurveConfig:
    slices: int = 2001
    samples: int = 400
    tol: float = 1e-13


def _slice_fn(f: Polynomial, t: float):
    def h(x1):
        return f.evaluate_float((x1, 1.0 - t - x1, t))
    return h


def curve_points(f: Polynomial, slices: int = 2001, samples: int = 400) -> list[tuple[float, float, float]]:
    """Points of ``{f = 0}`` in the triangle, found on the slices ``x3 = t``."""
    pts = []
    terms = [(float(c), e) for e, c in f.terms.items()]
    for t in np.linspace(0.0, 1.0, slices):
        width = 1.0 - t
        if width <= 0:
            continue
        xs = np.linspace(0.0, width, samples)
        x2 = width - xs
        vals = np.zeros_like(xs)
        for c, (a, b, k) in terms:
            vals += c * xs ** a * x2 ** b * t ** k
        h = _slice_fn(f, float(t))
        for i in np.flatnonzero(vals == 0.0):
            pts.append((float(xs[i]), float(x2[i]), float(t)))
        for i in np.flatnonzero(vals[:-1] * vals[1:] < 0):
            r = brentq(h, xs[i], xs[i + 1], xtol=1e-15)
            pts.append((r, width - r, float(t)))
    return pts


def implicit_curve_min(model: ImplicitCurveModel | Polynomial, c, config: CurveConfig | None = None):
    """Numeric minimum of ``c . x`` over the curve inside the triangle.

    Returns ``(x_star, value)``.  The result is heuristic: slices that only touch
    the curve tangentially can be missed.
    """
    cfg = config or CurveConfig()
    f = model.f if isinstance(model, ImplicitCurveModel) else model
    if len(f.variables) != 3:
        raise ValidationError("implicit curves are supported in three coordinates only")
    cv = np.array([float(x) for x in c])
    pts = curve_points(f, cfg.slices, cfg.samples)
    if not pts:
        raise NumericInfeasibleError("curve misses the simplex (numerically)")
    P = np.array(pts)
    x0 = P[np.argmin(P @ cv)]
    x = _refine_on_curve(f, cv, x0, cfg.tol)
    return tuple(float(v) for v in x), float(cv @ x)


def _refine_on_curve(f: Polynomial, cv: np.ndarray, x0: np.ndarray, tol: float) -> np.ndarray:
    grad = [f.diff(v) for v in f.variables]

    def fval(x):
        return f.evaluate_float(x)

    def fgrad(x):
        return np.array([g.evaluate_float(x) for g in grad])

    cons = [
        {"type": "eq", "fun": fval, "jac": fgrad},
        {"type": "eq", "fun": lambda x: x.sum() - 1.0, "jac": lambda x: np.ones(3)},
    ]
    res = minimize(lambda x: float(cv @ x), x0, jac=lambda x: cv, method="SLSQP",
                   bounds=[(0.0, 1.0)] * 3, constraints=cons, options={"ftol": 1e-15, "maxiter": 500})
    x1 = res.x if np.all(np.isfinite(res.x)) else x0

    # Lagrange system: c = lam * grad f + eta * 1, f = 0, sum x = 1
    def kkt(z):
        x, lam, eta = z[:3], z[3], z[4]
        return np.concatenate([cv - lam * fgrad(x) - eta, [fval(x), x.sum() - 1.0]])

    g = fgrad(x1)
    A = np.stack([g, np.ones(3)], axis=1)
    (lam, eta), *_ = np.linalg.lstsq(A, cv, rcond=None)
    z, _, ier, _ = fsolve(kkt, np.concatenate([x1, [lam, eta]]), xtol=tol, full_output=True)
    x2 = z[:3]
    if (ier == 1 and np.all(x2 >= -1e-12) and np.linalg.norm(x2 - x1) < 1e-4
            and abs(fval(x2)) <= abs(fval(x1)) + 1e-12):
        return x2
    return x1
