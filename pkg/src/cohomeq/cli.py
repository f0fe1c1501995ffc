"""Command-line front end.

Subcommands: solve-finite, solve-rotation, solve-rational-rotation,
alpha-profile, series-probe, power-probe, measures, oracle-check.

Artifacts are machine-readable: JSON with sorted keys and rationals as
"p/q" strings, CSV with floats at 17 significant digits.  Identical request
plus seed gives byte-identical output.  Exit codes: 0 success, 1 domain
error (structured JSON on stdout), 2 I/O or parse failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

import numpy as np

from . import discrete_solver as ds
from . import measures, powermap, rotation, summation
from .errors import CohomeqError
from .functional_graph import FiniteSystem, decompose
from .rotation import RotationNumber
from .trigpoly import TrigPoly


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _emit_json(obj, out):
    out.write(json.dumps(obj, sort_keys=True, indent=2, default=_fmt))
    out.write("\n")


def _emit_csv(rows, header, out):
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _load_input(args) -> dict:
    if args.input == "-" or args.input is None:
        return json.load(sys.stdin)
    with open(args.input) as fh:
        return json.load(fh)


def _open_output(args):
    if args.output and args.output != "-":
        return open(args.output, "w")
    return sys.stdout


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_solve_finite(args, out):
    problem = ds.CoboundaryProblem.from_json(_load_input(args))
    method = args.method
    if method == "auto" or method == "transversal":
        sol = ds.solve_transversal(problem)
    elif method == "preperiodic":
        sol = ds.solve_preperiodic(problem)
    elif method == "periodic":
        sol = ds.solve_periodic(problem)
    else:
        raise ValueError(f"unknown method {method}")
    doc = sol.to_json()
    doc["residual_zero"] = all(
        d == 0 for d in ds.residual(problem.sys, problem.gamma, sol.phi))
    _emit_json(doc, out)


def _cmd_solve_rotation(args, out):
    obj = _load_input(args)
    extra = set(obj) - {"h", "alpha"}
    if extra:
        raise ValueError(f"unknown fields: {sorted(extra)}")
    h = TrigPoly.from_json(obj["h"])
    alpha = RotationNumber.from_json(obj["alpha"])
    sol = rotation.solve_trig_poly(h, alpha)
    doc = sol.to_json()
    doc["residual_grid_sup"] = rotation.residual_on_grid(h, alpha, sol, grid=args.grid)
    _emit_json(doc, out)


def _cmd_solve_rational_rotation(args, out):
    obj = _load_input(args)
    extra = set(obj) - {"h", "p", "r"}
    if extra:
        raise ValueError(f"unknown fields: {sorted(extra)}")
    h = TrigPoly.from_json(obj["h"])
    p, r = int(obj["p"]), int(obj["r"])
    sol = rotation.solve_rational_rotation(h, p, r, tol=args.tol)
    xs = np.arange(args.grid) / args.grid
    fx = np.atleast_1d(sol.eval(xs))
    resid = np.atleast_1d(sol.eval(np.mod(xs + r / p, 1.0))) - fx - np.atleast_1d(h.eval(xs))
    if args.format == "csv":
        _emit_csv(zip(xs.tolist(), fx.tolist()), ["x", "f"], out)
    else:
        _emit_json({
            "p": p, "r": r,
            "grid": args.grid,
            "residual_grid_sup": float(np.max(np.abs(resid))),
            "values": [float(v) for v in fx],
        }, out)


def _cmd_alpha_profile(args, out):
    obj = _load_input(args)
    alpha = RotationNumber.from_json(obj)
    prof = rotation.small_denominator_profile(alpha, args.N)
    cf = rotation.continued_fraction(alpha, args.count or 32)
    if args.format == "csv":
        rows = [(n + 1, prof.dist[n], prof.denom[n]) for n in range(args.N)]
        _emit_csv(rows, ["n", "dist", "denom"], out)
        return
    verdict = rotation.badly_approximable(alpha) if alpha.kind != "decimal" else None
    _emit_json({
        "cf_quotients": list(cf.quotients),
        "convergents": [[p, q] for p, q in cf.convergents],
        "period": [cf.period_start, cf.period_length] if cf.period_length else None,
        "c_hat": prof.c_hat,
        "c_hat_at": prof.c_hat_at,
        "identity_defect": prof.identity_defect,
        "badly_approximable": None if verdict is None else verdict.kind,
        "quotient_bound": None if verdict is None else verdict.bound,
        "normal_solvability": rotation.normal_solvability_classify(alpha),
    }, out)


def _cmd_series_probe(args, out):
    obj = _load_input(args)
    kind = obj.get("kind")
    if kind == "finite":
        extra = set(obj) - {"kind", "problem", "x"}
        if extra:
            raise ValueError(f"unknown fields: {sorted(extra)}")
        problem = ds.CoboundaryProblem.from_json(obj["problem"])
        series = summation.FiniteOrbitSeries(problem.sys, problem.gamma, int(obj["x"]))
        x_label = int(obj["x"])
    elif kind == "rotation":
        extra = set(obj) - {"kind", "h", "alpha", "x"}
        if extra:
            raise ValueError(f"unknown fields: {sorted(extra)}")
        h = TrigPoly.from_json(obj["h"])
        alpha = RotationNumber.from_json(obj["alpha"])
        series = summation.RotationSeries(h, alpha, float(obj["x"]))
        x_label = float(obj["x"])
    else:
        raise ValueError("kind must be 'finite' or 'rotation'")
    spec = summation.SummationSpec(tolerance=args.tol, window=32)
    pr = summation.cesaro(series, args.N, spec)
    if args.format == "csv":
        _emit_csv(summation.probe_rows(x_label, pr),
                  ["x", "n", "s_n", "sigma_n", "sup_neg_s_n"], out)
    else:
        _emit_json(summation.verdict_summary(pr), out)


def _cmd_power_probe(args, out):
    obj = _load_input(args)
    extra = set(obj) - {"q", "h", "grid", "N", "precision_bits"}
    if extra:
        raise ValueError(f"unknown fields: {sorted(extra)}")
    h = TrigPoly.from_json(obj["h"])
    rep = powermap.kolmogorov_probe(
        int(obj["q"]), h, int(obj.get("grid", args.grid)),
        int(obj.get("N", args.N)),
        precision_bits=int(obj.get("precision_bits", args.precision_bits)),
    )
    if args.format == "csv":
        _emit_csv(rep.growth, ["N", "G"], out)
    else:
        _emit_json({
            "grid": rep.grid, "N": rep.N,
            "precision_bits": rep.precision_bits,
            "overall_max": rep.overall_max,
            "growth": {str(k): v for k, v in rep.growth},
            "cesaro": [[j, kind] for j, kind in rep.cesaro],
        }, out)


def _cmd_measures(args, out):
    sys_ = FiniteSystem.from_json(_load_input(args))
    dec = decompose(sys_)
    rep = measures.mean_ergodic_projector(sys_, n_max=min(args.N, 400))
    if args.format == "csv":
        _emit_csv(rep.rate_rows, ["n", "norm_inf"], out)
        return
    _emit_json({
        "cycles": [list(c) for c in dec.cycle_lists],
        "measures": [m.to_json() for m in measures.cycle_measures(sys_)],
        "projector": rep.to_json(),
        "global_preperiod": dec.global_preperiod,
        "global_period": dec.global_period,
    }, out)


def _cmd_oracle_check(args, out):
    rng = random.Random(args.seed)
    agree = disagree = 0
    for _ in range(args.count):
        n = rng.randint(1, 12)
        sysn = FiniteSystem.from_succ([rng.randrange(n) for _ in range(n)])
        if rng.random() < 0.5:
            phi = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]
            gamma = tuple(phi[sysn.succ[x]] - phi[x] for x in range(n))
        else:
            gamma = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n))
        problem = ds.CoboundaryProblem(sysn, gamma)
        verdict = ds.check_solvable(problem).solvable
        oracle = ds.solve_linear_oracle(problem) is not None
        if verdict == oracle:
            agree += 1
        else:
            disagree += 1
    _emit_json({"agree": agree, "disagree": disagree, "count": args.count,
                "seed": args.seed}, out)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cohomeq", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", default=None, help="input JSON path ('-' = stdin)")
        p.add_argument("--output", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--N", type=int, default=1000)
        p.add_argument("--grid", type=int, default=1000)
        p.add_argument("--precision-bits", dest="precision_bits", type=int, default=256)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--count", type=int, default=None)

    p = sub.add_parser("solve-finite", help="exact solution on a finite system")
    common(p)
    p.add_argument("--method", choices=["auto", "transversal", "preperiodic", "periodic"],
                   default="auto")
    p.set_defaults(fn=_cmd_solve_finite)

    for name, fn in [
        ("solve-rotation", _cmd_solve_rotation),
        ("solve-rational-rotation", _cmd_solve_rational_rotation),
        ("alpha-profile", _cmd_alpha_profile),
        ("series-probe", _cmd_series_probe),
        ("power-probe", _cmd_power_probe),
        ("measures", _cmd_measures),
        ("oracle-check", _cmd_oracle_check),
    ]:
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "oracle-check" and args.count is None:
        args.count = 100
    try:
        out = _open_output(args)
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=sys.stderr)
        return 2
    try:
        args.fn(args, out)
        return 0
    except CohomeqError as exc:
        _emit_json(exc.to_json(), out)
        return 1
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 2
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    raise SystemExit(main())
