"""Command line entry point ``fraclab``.

Subcommands: ``eval``, ``oracles``, ``thm12``, ``thm13``, ``estimate-b``
and ``choose-r``. Every suite accepts ``--config FILE`` (flat
``key = value`` file, see :mod:`fraclab.harness.config`); flags override
the file. Exit status is 0 when all checks pass, 1 when a check fails and
2 on bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from ..quadrature import fraclap_pv
from ..specfun import FracParams
from .config import load_config
from .descriptors import parse_field
from .report import VerificationReport
from .suites import choose_r_report, verify_oracles, verify_thm11, verify_thm12, verify_thm13

__all__ = ["main", "build_parser"]


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers, got {text!r}") from None


def _quad(text: str) -> tuple:
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected key=value")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fraclab", description="Fractional Laplacian experiments and checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--n", type=int)
    common.add_argument("--sigma", type=float)
    common.add_argument("--p", type=float)
    common.add_argument("--q", type=float)
    common.add_argument("--quad", type=_quad, action="append", default=[], metavar="KEY=VALUE",
                        help="quadrature override, e.g. rel_tol=1e-9 (repeatable)")
    common.add_argument("--out", help="JSON report path")
    common.add_argument("--csv-dir", help="directory for CSV tables (default: next to --out)")

    e = sub.add_parser("eval", parents=[common], help="evaluate the operator once")
    e.add_argument("--field", default="constant:1", help="field descriptor, e.g. gaussian, v:16, u:10")
    e.add_argument("--x", type=_floats, default=None, help="evaluation point, comma separated")

    sub.add_parser("oracles", parents=[common], help="quadrature trust anchors")

    t2 = sub.add_parser("thm12", parents=[common], help="mollified family converging to 1")
    t2.add_argument("--j", type=_floats, dest="j_grid")
    t2.add_argument("--x-samples", type=_floats)
    t2.add_argument("--radius", type=_floats, dest="radius_grid")

    t3 = sub.add_parser("thm13", parents=[common], help="blow-up family with negative prescribed function")
    t3.add_argument("--lambda", type=_floats, dest="lambda_grid")

    b = sub.add_parser("estimate-b", parents=[common], help="tail split, sandwich bounds and the constant b")
    b.add_argument("--j", type=_floats, dest="j_grid")
    b.add_argument("--index", type=_floats, dest="index_grid")
    b.add_argument("--radius", type=_floats, dest="radius_grid")
    b.add_argument("--x-samples", type=_floats)
    b.add_argument("--index-method", choices=("last", "richardson"))
    b.add_argument("--radius-method", choices=("last", "richardson"))

    r = sub.add_parser("choose-r", parents=[common], help="least admissible radius R")
    r.add_argument("--lambda", type=float, dest="lam", default=1.0)
    return ap


_THEOREM = {"oracles": "oracles", "thm12": "thm12", "thm13": "thm13", "estimate-b": "thm11_b",
            "choose-r": "thm13", "eval": "oracles"}


def _config(args, ap):
    keys = ("n", "sigma", "p", "q", "out", "csv_dir", "j_grid", "lambda_grid", "x_samples", "index_grid",
            "radius_grid", "index_method", "radius_method")
    over = {k: getattr(args, k, None) for k in keys}
    over["theorem"] = _THEOREM[args.command]
    if args.quad:
        from .config import _quad_value
        try:
            over["quad"] = {k: _quad_value(k, v) for k, v in args.quad}
        except (KeyError, ValueError) as exc:
            ap.error(f"bad --quad override: {exc}")
    try:
        return load_config(args.config, **over)
    except (ValueError, TypeError, OSError) as exc:
        ap.error(str(exc))


def _write(rep: VerificationReport, cfg) -> None:
    if cfg.out:
        out = Path(cfg.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(rep.to_json() + "\n")
    if rep.tables and (cfg.out or cfg.csv_dir):
        d = Path(cfg.csv_dir) if cfg.csv_dir else Path(cfg.out).parent
        stem = Path(cfg.out).stem if cfg.out else rep.suite
        d.mkdir(parents=True, exist_ok=True)
        for name, (header, rows) in rep.tables.items():
            with open(d / f"{stem}_{name}.csv", "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                for row in rows:
                    w.writerow([repr(float(v)) for v in row])


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = _config(args, ap)

    if args.command == "eval":
        P = FracParams.make(cfg.n, cfg.sigma)
        try:
            field = parse_field(args.field, P, cfg.p, cfg.q)
        except ValueError as exc:
            ap.error(str(exc))
        x = np.zeros(cfg.n) if args.x is None else np.asarray(args.x, dtype=float)
        if x.size != cfg.n:
            ap.error(f"--x needs {cfg.n} coordinates")
        v, err = fraclap_pv(field, x, P, cfg.quad_config())
        print(f"{v!r} {err!r}")
        return 0

    if args.command == "choose-r":
        rep = choose_r_report(cfg, args.lam)
        c = rep.checks[0].computed
        print(f"R = {rep.constants['R']!r}")
        print(f"condition a margin = {c['a_margin']!r}")
        print(f"condition b margin = {c['b_margin']!r}")
    else:
        suite = {"oracles": verify_oracles, "thm12": verify_thm12, "thm13": verify_thm13,
                 "estimate-b": verify_thm11}[args.command]
        rep = suite(cfg)
        if "b" in rep.constants:
            print(f"b = {rep.constants['b']!r}")
    for line in rep.summary_lines():
        print(line)
    _write(rep, cfg)
    return 0 if rep.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
