"""Command-line entry point: ``qgraph <command> ...``.

Every command prints one report (JSON by default) and exits 0 only when
no check it ran was violated.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import replace

from qgraph import coloring, regular, spectral
from qgraph.config import FORMATS, ConfigError, RunConfig
from qgraph.localfield import PadicNumber, parse_rational
from qgraph.oscint import (
    J1_bruteforce,
    J1_exact,
    OddPrimeError,
    PadicChoppedMeasure,
    real_mu_hat_estimate,
)
from qgraph.qform import (
    ANISOTROPIC,
    DegenerateFormError,
    FormSyntaxError,
    Place,
    QuadraticSpace,
    form_report,
)

SCHEMA = 1
REAL_TABLE_T = (5, 10, 20, 40)
PADIC_TABLE_T = (1, 2, 3, 4)


class CheckFailed(Exception):
    """A command finished but one of its checks was violated."""


# -- output --------------------------------------------------------------------------------

def _drop_timings(obj):
    if isinstance(obj, dict):
        return {k: _drop_timings(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [_drop_timings(v) for v in obj]
    return obj


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, value in obj.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for row in value:
                lines.append(pad + "  - " + ", ".join(f"{k}={v}" for k, v in row.items()))
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue().rstrip("\n")


def emit(report: dict, fmt: str, rows_key: str | None = None, timings: bool = False) -> str:
    """Render a report; CSV needs a list of flat rows, taken from ``rows_key`` or the report itself."""
    report = {"schema": SCHEMA, **report}
    if not timings:
        report = _drop_timings(report)
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=str)
    if fmt == "text":
        return "\n".join(_text(report))
    rows = report.get(rows_key) if rows_key else None
    if not rows:
        rows = [{k: v for k, v in report.items() if not isinstance(v, (dict, list))}]
    return _csv(rows)


# -- commands ------------------------------------------------------------------------------

def _place(text: str) -> Place:
    try:
        return Place.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bound_report(place: Place, T, cfg: RunConfig, search: bool) -> dict:
    if place.kind == "R":
        if not search:
            return {"place": "R", "T": T, "analytic_bound": spectral.real_analytic_bound(T),
                    "analytic_floor": spectral.real_floor(T)}
        report = spectral.real_chopped_bound(T, cfg.grid, cfg.workers).to_json()
    elif place.kind == "Qp":
        if int(T) != T:
            raise ValueError("p-adic T must be an integer")
        T = int(T)
        if not search:
            return {"place": str(place), "p": place.p, "T": T,
                    "analytic_bound": float(spectral.padic_analytic_bound(T)),
                    "analytic_floor": float(spectral.padic_floor(place.p, T))}
        report = spectral.padic_chopped_bound(place.p, T, cfg.corpus).to_json()
    else:
        raise ValueError(f"spectral bounds are defined over R and Q_p, not {place}")
    if not report["floor_ok"]:
        raise CheckFailed(report)
    return report


def cmd_classify(args, cfg: RunConfig) -> dict:
    Q = QuadraticSpace.parse(args.form)
    out = {"form": args.form, **form_report(Q)}
    place = Q.place
    if place.kind == "Q" or place.kind == "C":
        return out
    if out["verdict"] == ANISOTROPIC:
        radii = coloring.sphere_annulus(Q)
        if place.kind == "R":
            scheme = coloring.build_box_coloring(radii, Q.n)
        else:
            scheme = coloring.build_digit_coloring(radii, Q.n)
        out["consequence"] = "finite chromatic number: explicit coloring"
        out["coloring"] = scheme.to_json()
        return out
    out["consequence"] = "unbounded: Hoffman lower bounds grow with T"
    if place.kind == "R":
        out["bound_table"] = [{"T": T, "analytic_bound": spectral.real_analytic_bound(T)} for T in REAL_TABLE_T]
    elif place.p == 2:
        out["bound_table"] = None
        out["notes"] = ["p-adic spectral bounds are restricted to odd primes; p=2 is not tabulated"]
    else:
        out["bound_table"] = [{"T": T, "analytic_bound": float(spectral.padic_analytic_bound(T))}
                              for T in PADIC_TABLE_T]
    return out


def cmd_bound(args, cfg: RunConfig) -> dict:
    return _bound_report(args.place, args.T, cfg, args.search)


def cmd_table(args, cfg: RunConfig) -> dict:
    if args.max_p is not None:
        return {"table": "sum-of-squares digit colorings, p = 3 mod 4",
                "rows": coloring.sum_of_squares_table(args.max_p)}
    place = args.place
    Ts = args.T or (REAL_TABLE_T if place.kind == "R" else PADIC_TABLE_T)
    rows = []
    for T in Ts:
        rep = _bound_report(place, T, cfg, args.search)
        rows.append({"T": T, "analytic_bound": rep["analytic_bound"],
                     "searched_bound": rep.get("searched_bound"), "inf_estimate": rep.get("inf_estimate")})
    return {"place": str(place), "rows": rows}


def _random_padic_input(p: int, seed: int) -> tuple:
    rng = random.Random(seed)
    points = list(spectral.padic_corpus(p, 2))
    return spectral.corpus_point(p, rng.choice(points))


def cmd_fourier(args, cfg: RunConfig) -> dict:
    place, T = args.place, args.T
    if place.kind == "R":
        x = float(args.x or 0)
        y = float(args.y or 0)
        value, err, panels = real_mu_hat_estimate(T, x, y)
        out = {"place": "R", "T": T, "x": x, "y": y, "mu_hat": value,
               "method": "quadrature", "error_estimate": err, "panels": panels}
        if err > cfg.quad_tol:
            raise CheckFailed(out)
        return out
    if place.kind != "Qp":
        raise ValueError(f"mu_hat is defined over R and Q_p, not {place}")
    p = place.p
    if int(T) != T:
        raise ValueError("p-adic T must be an integer")
    T = int(T)
    measure = PadicChoppedMeasure(p, T)
    if args.x is None and args.y is None:
        x, y = _random_padic_input(p, args.seed)
    else:
        x, y = parse_rational(args.x or "0"), parse_rational(args.y or "0")
    px = PadicNumber.from_rational(x, p, cfg.precision)
    py = PadicNumber.from_rational(y, p, cfg.precision)
    j1 = J1_exact(px, py, T)
    mu = j1.scale(2 / measure.L)
    exact = mu.as_rational()
    out = {"place": str(place), "p": p, "T": T, "x": str(x), "y": str(y), "mu_hat": float(mu),
           "mu_hat_exact": str(exact) if exact is not None else None,
           "J1": float(j1), "method": "exact"}
    ok = float(mu) >= float(measure.floor) - 1e-12
    if args.check:
        agree = J1_bruteforce(px, py, T) == j1
        out["check"] = "exact == oracle" if agree else "exact != oracle"
        ok = ok and agree
    if not ok:
        raise CheckFailed(out)
    return out


def _form_scheme(form: str):
    Q = QuadraticSpace.parse(form)
    radii = coloring.sphere_annulus(Q)
    if Q.place.kind == "R":
        return Q, coloring.build_box_coloring(radii, Q.n), coloring.RealSphereSampler(Q)
    return Q, coloring.build_digit_coloring(radii, Q.n), coloring.PadicSphereSampler(Q)


def cmd_color(args, cfg: RunConfig) -> dict:
    Q, scheme, sampler = _form_scheme(args.form)
    out = {"form": args.form, "place": str(Q.place), "scheme": scheme.to_json()}
    if args.action == "build":
        return out
    samples = args.samples or cfg.samples
    report = coloring.verify_proper(scheme, sampler, samples, args.seed, cfg.workers, cfg.chunk)
    out["verification"] = report.to_json()
    ok = report.ok
    if args.control:
        control = coloring.undersized(scheme)
        crep = coloring.verify_proper(control, sampler, samples, args.seed, cfg.workers, cfg.chunk)
        out["control"] = {"scheme": control.to_json(), "verification": crep.to_json(),
                          "detected": crep.violations > 0}
        ok = ok and crep.violations > 0
    if not ok:
        raise CheckFailed(out)
    return out


def cmd_clique(args, cfg: RunConfig) -> dict:
    cert = coloring.simplex_clique(args.n)
    return {"n": args.n, "clique_upper": coloring.clique_upper(args.n),
            "sharp": cert.size == coloring.clique_upper(args.n), "certificate": cert.to_json()}


def cmd_regular(args, cfg: RunConfig) -> dict:
    if args.action == "cn":
        return {"n": args.n, "C_n": regular.compute_Cn(args.n)}
    samples = args.samples or 10_000
    report = regular.check_identity(samples, args.seed)
    out = report.to_json(args.records)
    if report.failures:
        raise CheckFailed(out)
    return out


def cmd_config(args, cfg: RunConfig) -> dict:
    if args.write:
        cfg.save(args.write)
    return {"config": cfg.to_json()}


# -- parser --------------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the options appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="PRNG seed (default 0)")
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON run configuration")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                        help="worker threads (overrides config and QGRAPH_THREADS)")
    common.add_argument("--timings", action="store_true", default=argparse.SUPPRESS,
                        help="keep wall-clock fields in reports")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qgraph", parents=[common],
                                     description="Chromatic bounds for quadratic graphs over R and Q_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="isotropy verdict and its consequence")
    p.add_argument("form", help='e.g. "place=Qp:3; diag=1,1"')
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bound", parents=[common], help="Hoffman-type lower bound for one T")
    p.add_argument("--place", type=_place, required=True, help="R or Qp:p")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--no-search", dest="search", action="store_false", help="analytic bound only")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("fourier", parents=[common], help="mu_hat_T(x, y)")
    p.add_argument("--place", type=_place, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--x", help="rational (p-adic) or float (real); both omitted draws a random p-adic pair")
    p.add_argument("--y")
    p.add_argument("--check", action="store_true", help="compare with the residue-class oracle")
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("color", parents=[common], help="build or verify an explicit coloring")
    p.add_argument("action", choices=("build", "verify"))
    p.add_argument("--form", required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--control", action="store_true", help="also verify an undersized scheme, which must fail")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("clique", parents=[common], help="regular-simplex clique certificate")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_clique)

    p = sub.add_parser("regular", parents=[common], help="regular-graph embedding checks")
    p.add_argument("action", choices=("check", "cn"))
    p.add_argument("--samples", type=int)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--records", type=int, default=10, help="quadruples echoed in the report")
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("table", parents=[common], help="bound table over T, or the p-sweep of colorings")
    p.add_argument("--place", type=_place, default=Place("R"))
    p.add_argument("--T", type=float, nargs="+")
    p.add_argument("--max-p", type=int, help="sum-of-squares color counts for p = 3 mod 4 up to this bound")
    p.add_argument("--no-search", dest="search", action="store_false")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("config", parents=[common], help="show or write the effective configuration")
    p.add_argument("--write", metavar="PATH")
    p.set_defaults(func=cmd_config)
    return parser


ROWS_KEY = {"table": "rows", "regular": "records"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed = getattr(args, "seed", 0)
    try:
        cfg = RunConfig.load(args.config) if getattr(args, "config", None) else RunConfig()
        cfg = cfg.with_env()
        if getattr(args, "workers", None):
            cfg = replace(cfg, workers=args.workers)
        if getattr(args, "format", None):
            cfg = replace(cfg, format=args.format)
    except (ConfigError, OSError) as exc:
        parser.exit(2, f"qgraph: config error: {exc}\n")
    timings = getattr(args, "timings", False)
    status = 0
    try:
        report = args.func(args, cfg)
    except CheckFailed as exc:
        report, status = exc.args[0], 1
    except FormSyntaxError as exc:
        parser.exit(2, f"qgraph: {exc}\n")
    except (DegenerateFormError, OddPrimeError, coloring.EmptySphereError, ValueError) as exc:
        parser.exit(2, f"qgraph: {exc}\n")
    report = {"command": args.command, "ok": status == 0, **report}
    print(emit(report, cfg.format, ROWS_KEY.get(args.command), timings))
    return status


if __name__ == "__main__":
    sys.exit(main())
