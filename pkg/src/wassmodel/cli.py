"""Command-line entry point: ``wassmodel {distance,triangulate,model-distance,heatmap}``.

Exit codes: 0 success, 2 invalid input, 3 outside engine capabilities,
4 numerically infeasible.
"""
from __future__ import annotations

import argparse
import io as _io
import sys
from fractions import Fraction
from pathlib import Path

from .driver import model_distance
from .errors import CapabilityError, NumericInfeasibleError, ValidationError
from .exact import QuadraticNumber, rat_str
from .io import (
    dumps,
    exact_number_json,
    load_json,
    parse_distribution,
    parse_metric,
    parse_problem,
    result_to_json,
)
from .models import ImplicitCurveModel
from .optimize import NumericConfig, feasible_intervals
from .transport import wasserstein
from .triangulation import coarsen, format_component, regular_triangulation, secondary_cone, to_monomial_ideal

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPABILITY = 3
EXIT_INFEASIBLE = 4


def _read_metric(arg: str):
    """A JSON file, or a name such as ``discrete:3`` or ``hamming_2bit``."""
    if arg == "hamming_2bit" or arg.startswith("discrete:"):
        return parse_metric(arg)
    path = Path(arg)
    if not path.exists():
        raise ValidationError(f"{arg}: no such file")
    doc = load_json(path)
    n = doc.get("n") if isinstance(doc, dict) else None
    return parse_metric(doc, n)


def _read_problem(path: str):
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"{path}: no such file")
    return parse_problem(load_json(p))


def _numeric_config(args, options: dict) -> NumericConfig:
    kw = {}
    grid = getattr(args, "grid", None) or options.get("grid")
    tol = getattr(args, "tol", None) or options.get("tol")
    if grid:
        kw["grid"] = int(grid)
    if tol:
        kw["tol"] = float(tol)
    return NumericConfig(**kw)


# -- subcommands ---------------------------------------------------------------

def cmd_distance(args) -> str:
    d = _read_metric(args.metric)
    mu = parse_distribution(args.mu, "mu")
    nu = parse_distribution(args.nu, "nu")
    value, plan = wasserstein(d, mu, nu)
    doc = {
        "distance": {"exact": exact_number_json(value), "text": rat_str(value), "float": float(value)},
        "plan": [[i, j, rat_str(v)] for i, j, v in plan.sparse()],
    }
    return dumps(doc)


def cmd_triangulate(args) -> str:
    d = _read_metric(args.metric)
    t = regular_triangulation(d)
    fmt = args.format
    if fmt == "trees":
        return "".join(f"{k}\t{s.label()}\n" for k, s in enumerate(t.simplices, start=1))
    if fmt == "ideal":
        return to_monomial_ideal(t) + "\n"
    if fmt == "cells":
        index = {s: k for k, s in enumerate(t.simplices, start=1)}
        lines = []
        for c, cell in enumerate(coarsen(t), start=1):
            members = ",".join(str(index[s]) for s in cell.member_simplices)
            lines.append(f"{c}\t{cell.value_functional}\t{members}\n")
        return "".join(lines)
    if fmt == "cone":
        return "".join(f"{q}\n" for q in secondary_cone(t))
    doc = {
        "n": t.n,
        "perturbed": t.perturbed,
        "simplices": [
            {"edges": [[i + 1, j + 1] for i, j in s.edges],
             "component": format_component([(i + 1, j + 1) for i, j in s.complement()])}
            for s in t.simplices
        ],
        "cells": [str(c.value_functional) for c in coarsen(t)],
        "cone": [q.to_json() for q in secondary_cone(t)],
    }
    return dumps(doc)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(QuadraticNumber._coerce(x))


def _table(opt, report, model) -> str:
    buf = _io.StringIO()
    head = ("cell", "objective", "feasible region", "solution", "minimum value")
    rows = []
    for r in report.rows:
        if r.status != "feasible" or r.objective is None:
            obj = str(r.objective) if r.objective is not None else "-"
            rows.append((str(r.cell_id), obj, "null set", "infeasible", ""))
            continue
        if model.k == 1 and r.exact:
            ivs = feasible_intervals(r.constraints, model.bounds)
            region = " u ".join(f"{_fmt(a)} <= {model.variables[0]} <= {_fmt(b)}" for a, b in ivs)
        else:
            region = "; ".join(f"{g} >= 0" for g in r.constraints) or "whole domain"
        sol = "; ".join("(" + ", ".join(_fmt(x) for x in th) + ")" for th in r.minimizers)
        mark = " *" if r.cell_id in opt.cell_ids else ""
        rows.append((str(r.cell_id), str(r.objective), region, sol, _fmt(r.minimum) + mark))
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(head)]
    line = " | ".join(h.ljust(w) for h, w in zip(head, widths))
    buf.write(line + "\n" + "-+-".join("-" * w for w in widths) + "\n")
    for row in rows:
        buf.write(" | ".join(c.ljust(w) for c, w in zip(row, widths)) + "\n")
    buf.write(f"\ndistance = {_fmt(opt.value)} ({opt.value_float:.15g}) on cells {', '.join(map(str, opt.cell_ids))}\n")
    return buf.getvalue()


def cmd_model_distance(args) -> str:
    prob = _read_problem(args.problem)
    engine = args.engine or prob.engine
    cfg = _numeric_config(args, prob.options)
    opt, report = model_distance(prob.d, prob.mu, prob.model, engine=engine, config=cfg)
    if args.format == "table" and not isinstance(prob.model, ImplicitCurveModel):
        return _table(opt, report, prob.model)
    return dumps(result_to_json(opt, report, "numeric" if isinstance(prob.model, ImplicitCurveModel) else engine))


def _grid_axis(lo: Fraction, hi: Fraction, g: int) -> list[Fraction]:
    if g == 1:
        return [(lo + hi) / 2]
    return [lo + (hi - lo) * Fraction(i, g - 1) for i in range(g)]


def cmd_heatmap(args) -> str:
    prob = _read_problem(args.problem)
    model = prob.model
    if isinstance(model, ImplicitCurveModel) or model.k > 2:
        raise CapabilityError("heatmap needs a parametric model with one or two parameters")
    if args.grid < 1:
        raise ValidationError("--grid must be a positive integer")
    axes = [_grid_axis(lo, hi, args.grid) for lo, hi in model.bounds]
    buf = _io.StringIO()
    names = list(model.variables)
    buf.write(",".join(names + [f"{v}_exact" for v in names] + ["value", "value_exact"]) + "\n")
    points = [(x,) for x in axes[0]] if model.k == 1 else [(x, y) for x in axes[0] for y in axes[1]]
    for th in points:
        nu = model(th)
        w, _ = wasserstein(prob.d, prob.mu, nu)
        cols = [f"{float(x):.15g}" for x in th] + [rat_str(x) for x in th] + [f"{float(w):.15g}", rat_str(w)]
        buf.write(",".join(cols) + "\n")
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wassmodel", description="Exact Wasserstein distances to algebraic models.")
    ap.add_argument("--output", "-o", help="write the result here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="exact W(mu, nu) and an optimal plan")
    p.add_argument("metric", help="metric JSON file, or discrete:N, or hamming_2bit")
    p.add_argument("--mu", required=True, help="comma-separated rationals")
    p.add_argument("--nu", required=True, help="comma-separated rationals")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("triangulate", help="regular triangulation induced by a metric")
    p.add_argument("metric", help="metric JSON file, or discrete:N, or hamming_2bit")
    p.add_argument("--format", choices=("trees", "ideal", "cells", "cone", "json"), default="trees")
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("model-distance", help="distance from mu to a model")
    p.add_argument("problem", help="problem JSON document")
    p.add_argument("--engine", choices=("exact", "numeric"))
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--tol", type=float)
    p.add_argument("--grid", type=int)
    p.set_defaults(func=cmd_model_distance)

    p = sub.add_parser("heatmap", help="CSV of W(mu, phi(theta)) on a parameter grid")
    p.add_argument("problem", help="problem JSON document")
    p.add_argument("--grid", type=int, default=50)
    p.set_defaults(func=cmd_heatmap)

    for sp in sub.choices.values():
        sp.add_argument("--output", "-o", dest="sub_output", help="write the result here instead of stdout")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        text = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except NumericInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    out = getattr(args, "sub_output", None) or args.output
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
