"""Statistical models inside the probability simplex."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cells import CellProblem
from .errors import ValidationError
from .forms import AffineForm, Polynomial, affine_to_polynomial


@dataclass(frozen=True)
class ParametricModel:
    """Polynomial map from a box ``[lo, hi]^k`` into the simplex.

    ``coordinates[i]`` is the probability of state ``i + 1`` as a polynomial in
    the parameter names listed in ``variables``.
    """

    coordinates: tuple[Polynomial, ...]
    bounds: tuple[tuple[Fraction, Fraction], ...] = ()
    name: str = "parametric"

    def __post_init__(self):
        coords = tuple(self.coordinates)
        if not coords:
            raise ValidationError("model needs at least one coordinate")
        variables = coords[0].variables
        if any(c.variables != variables for c in coords):
            raise ValidationError("model coordinates use different parameter lists")
        bounds = self.bounds or tuple((Fraction(0), Fraction(1)) for _ in variables)
        bounds = tuple((Fraction(lo), Fraction(hi)) for lo, hi in bounds)
        if len(bounds) != len(variables):
            raise ValidationError(f"{len(bounds)} bounds for {len(variables)} parameters")
        if any(lo > hi for lo, hi in bounds):
            raise ValidationError("empty parameter box")
        total = sum(coords[1:], coords[0])
        if total != Polynomial.constant(variables, 1):
            raise ValidationError(f"model coordinates sum to {total}, not 1")
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "bounds", bounds)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.coordinates[0].variables

    @property
    def k(self) -> int:
        return len(self.variables)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    def degree(self) -> int:
        return max(c.degree() for c in self.coordinates)

    def __call__(self, theta: Sequence):
        return tuple(c.evaluate(list(theta)) for c in self.coordinates)

    def evaluate_float(self, theta: Sequence[float]) -> tuple[float, ...]:
        return tuple(c.evaluate_float(theta) for c in self.coordinates)

    def check_nonnegative(self, samples: int = 200, seed: int = 0) -> bool:
        """Sample the box (corners included) and test that every coordinate is >= 0."""
        rng = random.Random(seed)
        pts = [[lo if (m >> a) & 1 == 0 else hi for a, (lo, hi) in enumerate(self.bounds)]
               for m in range(2 ** self.k)]
        for _ in range(samples):
            pts.append([lo + (hi - lo) * Fraction(rng.randint(0, 1000), 1000) for lo, hi in self.bounds])
        return all(x >= 0 for p in pts for x in self(p))

    def to_json(self) -> dict:
        return {
            "type": self.name,
            "k": self.k,
            "parameters": list(self.variables),
            "coordinates": [c.to_json() for c in self.coordinates],
            "domain": [[str(lo), str(hi)] for lo, hi in self.bounds],
        }


def hardy_weinberg() -> ParametricModel:
    """``p -> (p^2, 2p(1-p), (1-p)^2)``."""
    (p,) = Polynomial.gens(("p",))
    return ParametricModel((p * p, 2 * p * (1 - p), (1 - p) * (1 - p)), name="hardy_weinberg")


def independence_2x2() -> ParametricModel:
    """Two independent bits: ``(p, q) -> (pq, p(1-q), (1-p)q, (1-p)(1-q))``."""
    p, q = Polynomial.gens(("p", "q"))
    return ParametricModel((p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q)), name="independence_2x2")


@dataclass(frozen=True)
class ImplicitCurveModel:
    """The curve ``{x in Delta_2 : f(x) = 0}`` for a polynomial ``f(x1, x2, x3)``."""

    f: Polynomial
    name: str = field(default="implicit_curve")

    def __post_init__(self):
        if len(self.f.variables) != 3:
            raise ValidationError("implicit curves are supported in three coordinates only")

    @property
    def n(self) -> int:
        return 3


def _compose_form(form: AffineForm, model: ParametricModel) -> Polynomial:
    images = {f"nu{i + 1}": c for i, c in enumerate(model.coordinates)}
    stray = [v for v in form.coeffs if v not in images]
    if stray:
        raise ValidationError(f"form depends on {stray}, which the model does not provide")
    out = Polynomial.constant(model.variables, form.constant)
    for v, c in form.coeffs.items():
        out = out + images[v] * c
    return out


def compose_cell(model: ParametricModel, cell: CellProblem) -> tuple[Polynomial, list[Polynomial]]:
    """Pull the cell's objective and nonconstant constraints back to parameter space."""
    if model.n != cell.sigma.n:
        raise ValidationError(f"dimension mismatch: model has {model.n} coordinates, cell has n={cell.sigma.n}")
    objective = _compose_form(cell.objective, model)
    constraints = []
    for c in cell.active_constraints:
        g = _compose_form(c, model)
        if g not in constraints:
            constraints.append(g)
    return objective, constraints


__all__ = [
    "ParametricModel",
    "ImplicitCurveModel",
    "hardy_weinberg",
    "independence_2x2",
    "compose_cell",
    "affine_to_polynomial",
]
