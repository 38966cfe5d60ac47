"""JSON problem and result documents.

Rationals travel as ``"p/q"`` strings; numbers ``a + b*sqrt(c)`` as
``{"a": ..., "b": ..., "c": ..., "float": ...}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .driver import CellReport, Optimum, PiecewiseReport
from .errors import ValidationError
from .exact import QuadraticNumber, exact_from_json, exact_to_json, rat_str, to_rational
from .forms import Polynomial
from .models import ImplicitCurveModel, ParametricModel, hardy_weinberg, independence_2x2
from .transport import Distribution, GroundMetric, discrete_metric, hamming_metric_2bit
from .triangulation import format_component

NAMED_METRICS = ("discrete", "hamming_2bit")


@dataclass
class ProblemDocument:
    d: GroundMetric
    mu: Distribution
    model: ParametricModel | ImplicitCurveModel
    engine: str = "exact"
    options: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.d.n


def load_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _rational(x, where: str) -> Fraction:
    try:
        return to_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{where}: not a rational number ({x!r})") from exc


def parse_metric(doc, n: int | None = None, where: str = "d") -> GroundMetric:
    """An explicit matrix, or ``"discrete"`` (needs ``n``) / ``"hamming_2bit"``."""
    if isinstance(doc, dict):
        doc = doc.get("d", doc.get("metric"))
        if doc is None:
            raise ValidationError(f"{where}: missing field 'd'")
    if isinstance(doc, str):
        if doc == "discrete":
            if n is None:
                raise ValidationError(f"{where}: 'discrete' needs n")
            return discrete_metric(n)
        if doc == "hamming_2bit":
            return hamming_metric_2bit()
        if doc.startswith("discrete:"):
            return discrete_metric(int(doc.split(":", 1)[1]))
        raise ValidationError(f"{where}: unknown named metric {doc!r}")
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise ValidationError(f"{where}: expected an n x n array")
    rows = [[_rational(x, f"{where}[{i + 1}][{j + 1}]") for j, x in enumerate(r)] for i, r in enumerate(doc)]
    if n is not None and len(rows) != n:
        raise ValidationError(f"{where}: expected {n} rows, got {len(rows)}")
    return GroundMetric(tuple(tuple(r) for r in rows))


def parse_distribution(doc, where: str = "mu") -> Distribution:
    if isinstance(doc, str):
        doc = [s for s in doc.split(",") if s.strip()]
    if not isinstance(doc, list):
        raise ValidationError(f"{where}: expected an array of rationals")
    vals = tuple(_rational(x, f"{where}[{i + 1}]") for i, x in enumerate(doc))
    try:
        return Distribution(vals)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _parse_terms(doc, variables, where: str) -> Polynomial:
    if not isinstance(doc, list):
        raise ValidationError(f"{where}: expected a term list [[coef, [exponents]], ...]")
    terms = []
    for t, item in enumerate(doc):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], list)):
            raise ValidationError(f"{where}[{t}]: expected [coef, [exponents]]")
        coef = _rational(item[0], f"{where}[{t}][0]")
        exps = item[1]
        if len(exps) != len(variables) or not all(isinstance(e, int) and e >= 0 for e in exps):
            raise ValidationError(f"{where}[{t}][1]: need {len(variables)} nonnegative integer exponents")
        terms.append((coef, exps))
    return Polynomial.from_terms(variables, terms)


def parse_model(doc, where: str = "model"):
    if isinstance(doc, str):
        doc = {"type": doc}
    if not isinstance(doc, dict) or "type" not in doc:
        raise ValidationError(f"{where}: expected an object with a 'type' field")
    kind = doc["type"]
    if kind == "hardy_weinberg":
        return hardy_weinberg()
    if kind == "independence_2x2":
        return independence_2x2()
    if kind == "parametric":
        k = doc.get("k")
        if not isinstance(k, int) or k < 1:
            raise ValidationError(f"{where}.k: expected a positive integer")
        names = tuple(doc.get("parameters") or (["p", "q", "r"][:k] if k <= 3 else [f"t{i + 1}" for i in range(k)]))
        if len(names) != k:
            raise ValidationError(f"{where}.parameters: expected {k} names")
        coords = doc.get("coordinates")
        if not isinstance(coords, list) or not coords:
            raise ValidationError(f"{where}.coordinates: expected a list of term lists")
        polys = tuple(_parse_terms(c, names, f"{where}.coordinates[{i}]") for i, c in enumerate(coords))
        domain = doc.get("domain") or [["0", "1"]] * k
        if len(domain) != k:
            raise ValidationError(f"{where}.domain: expected {k} intervals")
        bounds = tuple((_rational(lo, f"{where}.domain[{i}][0]"), _rational(hi, f"{where}.domain[{i}][1]"))
                       for i, (lo, hi) in enumerate(domain))
        try:
            return ParametricModel(polys, bounds, name="parametric")
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    if kind == "implicit_curve":
        return ImplicitCurveModel(_parse_terms(doc.get("f"), ("x1", "x2", "x3"), f"{where}.f"))
    raise ValidationError(f"{where}.type: unknown model type {kind!r}")


def parse_problem(doc) -> ProblemDocument:
    if not isinstance(doc, dict):
        raise ValidationError("problem document must be a JSON object")
    mu = parse_distribution(doc.get("mu"), "mu")
    n = doc.get("n", mu.n)
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n: expected a positive integer")
    if mu.n != n:
        raise ValidationError(f"mu: expected {n} entries, got {mu.n}")
    if "d" not in doc:
        raise ValidationError("d: missing field")
    d = parse_metric(doc["d"], n)
    if "model" not in doc:
        raise ValidationError("model: missing field")
    model = parse_model(doc["model"])
    if model.n != n:
        raise ValidationError(f"model: has {model.n} coordinates, expected {n}")
    engine = doc.get("engine", "exact")
    if engine not in ("exact", "numeric"):
        raise ValidationError(f"engine: expected 'exact' or 'numeric', got {engine!r}")
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise ValidationError("options: expected an object")
    return ProblemDocument(d, mu, model, engine, options)


def metric_to_json(d: GroundMetric) -> list:
    return [[rat_str(x) for x in r] for r in d.cost]


def model_to_json(model) -> dict:
    if isinstance(model, ImplicitCurveModel):
        return {"type": "implicit_curve", "f": [[rat_str(c), list(e)] for e, c in model.f.sorted_terms()]}
    if model.name in ("hardy_weinberg", "independence_2x2"):
        return {"type": model.name}
    return {
        "type": "parametric",
        "k": model.k,
        "parameters": list(model.variables),
        "coordinates": [[[rat_str(c), list(e)] for e, c in p.sorted_terms()] for p in model.coordinates],
        "domain": [[rat_str(lo), rat_str(hi)] for lo, hi in model.bounds],
    }


def problem_to_json(p: ProblemDocument) -> dict:
    return {
        "n": p.n,
        "d": metric_to_json(p.d),
        "mu": [rat_str(x) for x in p.mu],
        "model": model_to_json(p.model),
        "engine": p.engine,
        "options": p.options,
    }


# -- results -----------------------------------------------------------------

def value_to_json(x, exact: bool):
    return exact_to_json(x) if exact else float(x)


def exact_number_json(x) -> dict:
    """Always the ``{"a", "b", "c", "float"}`` form, also for rationals."""
    q = QuadraticNumber._coerce(x)
    return q.to_json()


def _candidate_json(c) -> dict:
    return {
        "theta": [exact_to_json(x) for x in c.theta],
        "value": exact_to_json(c.value),
        "float": float(c.value),
        "provenance": c.provenance,
        "source": c.source,
        "feasible": c.feasible,
    }


def _row_json(r: CellReport) -> dict:
    gens = [(i + 1, j + 1) for i, j in r.cell.sigma.complement()]
    out = {
        "cell_id": r.cell_id,
        "component": format_component(gens),
        "objective": r.objective.to_json() if r.objective is not None else None,
        "constraints": [g.to_json() for g in r.constraints],
        "status": r.status,
        "engine": r.engine,
        "fallback": r.fallback_reason,
        "candidates": [_candidate_json(c) for c in r.candidates],
    }
    if r.minimum is None:
        out["minimum"] = None
        out["minimizers"] = []
    else:
        out["minimum"] = {"value": value_to_json(r.minimum, r.exact), "float": float(r.minimum)}
        out["minimizers"] = [[value_to_json(x, r.exact) for x in th] for th in r.minimizers]
    return out


def result_to_json(opt: Optimum, report: PiecewiseReport, engine: str) -> dict:
    ex = opt.exact
    return {
        "distance": {
            "exact": exact_number_json(opt.value) if ex else None,
            "text": str(QuadraticNumber._coerce(opt.value)) if ex else None,
            "float": opt.value_float,
        },
        "theta_star": [[value_to_json(x, ex) for x in th] for th in opt.theta_star],
        "nu_star": [[value_to_json(x, ex) for x in nu] for nu in opt.nu_star],
        "cell_ids": opt.cell_ids,
        "cells": [_row_json(r) for r in report.rows],
        "plan": [[i, j, value_to_json(v, ex)] for i, j, v in opt.plan.sparse()],
        "triangulation_meta": {"simplices": report.simplex_count, "perturbed": report.perturbed},
        "engine": engine,
        "heuristic": opt.heuristic,
    }


def parse_result_distance(doc: dict):
    """Exact distance from a result document (``None`` for numeric results)."""
    ex = doc["distance"]["exact"]
    return None if ex is None else exact_from_json(ex)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
