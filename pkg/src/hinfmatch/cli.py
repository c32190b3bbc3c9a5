"""Command-line interface.

Exit codes: 0 success, 1 usage / I/O / parse error, 2 mathematical
precondition failure (degenerate or unsupported instance, controller pole).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .approximation import gap_sequence
from .conformal import LensParams, lens_map
from .exceptions import DegenerateInstanceError, PoleError, UnsupportedStructureError
from .hinf_norm import DiagonalController, circle_grid, hinf_norm
from .interpolation import solve_gamma
from .io import (
    FileFormatError,
    encode_rational,
    fmt_float,
    load_controller_spec,
    load_instance,
    unit_circle_poles,
)
from .selftest import run_selftest

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _write_csv(header, rows, out) -> None:
    fh = sys.stdout if out is None else open(out, "w", newline="")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if out is not None:
            fh.close()


def _g12(x: float) -> str:
    return f"{x + 0.0:.12g}"  # no "-0"


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    try:
        res = solve_gamma(inst, tol=args.tol)
    except (DegenerateInstanceError, UnsupportedStructureError) as exc:
        return _fail(EXIT_MATH, str(exc))
    payload = {
        "gamma_star": fmt_float(res.gamma_star),
        "p": encode_rational(res.p),
        "feasibility_margin": fmt_float(res.feasibility_margin),
        "supported": res.supported,
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    p_desc = "n/a" if res.p is None else f"num={list(res.p.num.coeffs)} den={list(res.p.den.coeffs)}"
    print(f"gamma_star={_g12(res.gamma_star)} p: {p_desc} margin={res.feasibility_margin:.3g}")
    if not args.out:
        print(json.dumps(payload))
    return EXIT_OK


def _controller_from_arg(arg, inst):
    if arg == "zero":
        return DiagonalController.zero()
    if arg == "optimal":
        return solve_gamma(inst).controller()
    spec = load_controller_spec(arg)
    entries = []
    for key in ("s1", "s2"):
        e = spec[key]
        if e == "optimal":
            entries.append(solve_gamma(inst).s_star)
            continue
        if unit_circle_poles(e).size:
            raise PoleError(f"controller entry {key} has a pole on the unit circle")
        if not e.is_stable():
            raise PoleError(f"controller entry {key} has a pole inside the unit disc")
        entries.append(e)
    if all(e is spec[k] for e, k in zip(entries, ("s1", "s2"))):
        return DiagonalController.rational(*entries)
    return DiagonalController("optimal", *entries)


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    try:
        q = _controller_from_arg(args.controller, inst)
        est = hinf_norm(inst, q, tol=args.tol)
    except (DegenerateInstanceError, UnsupportedStructureError, PoleError) as exc:
        return _fail(EXIT_MATH, str(exc))
    print(json.dumps({"norm": fmt_float(est.value), "grid_size": est.grid_size,
                      "converged": est.converged}))
    return EXIT_OK


def _parse_orders(text: str) -> list[int]:
    try:
        orders = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise FileFormatError(f"--orders: {exc}") from exc
    if not orders or orders != sorted(orders) or orders[0] < 0:
        raise FileFormatError("--orders: expected ascending non-negative integers")
    return orders


def cmd_gap(args) -> int:
    orders = _parse_orders(args.orders)
    inst = load_instance(args.instance)
    try:
        res = solve_gamma(inst)
        if not res.supported:
            raise UnsupportedStructureError("no explicit optimum to approximate for this structure")
        points = gap_sequence(inst, res.gamma_star, orders, p=res.p)
    except (DegenerateInstanceError, UnsupportedStructureError) as exc:
        return _fail(EXIT_MATH, str(exc))
    _write_csv(["order", "norm", "excess"],
               [[g.order, _g12(g.norm_value), _g12(g.excess)] for g in points], args.out)
    return EXIT_OK


def cmd_map(args) -> int:
    if not args.gamma > 1.0 or not math.isfinite(args.gamma):
        return _fail(EXIT_USAGE, "--gamma must be a finite number greater than 1")
    if args.grid < 1:
        return _fail(EXIT_USAGE, "--grid must be positive")
    params = LensParams.from_gamma(args.gamma)
    t = 2.0 * np.pi * np.arange(args.grid) / args.grid
    w = circle_grid(args.grid)
    f = lens_map(params, w)
    dist = np.maximum(np.abs(1 - f), np.abs(1 + f)) - params.gamma
    rows = [[_g12(x) for x in row]
            for row in zip(t, w.real, w.imag, f.real, f.imag, dist)]
    _write_csv(["t", "re_w", "im_w", "re_F", "im_F", "dist_lens_boundary"], rows, args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest(perturb=args.perturb)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<16} {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_MATH


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hinfmatch", description="Structured H-infinity model matching with a lens-map optimum.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="optimal cost and inner function")
    p.add_argument("instance")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="cost of a diagonal controller")
    p.add_argument("instance")
    p.add_argument("--controller", default="zero", help='controller JSON path, "optimal" or "zero"')
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gap", help="costs of polynomial approximants of the optimum")
    p.add_argument("instance")
    p.add_argument("--orders", default="1,3,5,9,15,25")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("map", help="sample the lens map on the unit circle")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--grid", type=int, default=720)
    p.add_argument("--out")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("selftest", help="run the embedded invariant suite")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "tol", 1.0) <= 0:
        return _fail(EXIT_USAGE, "--tol must be positive")
    try:
        return args.func(args)
    except FileFormatError as exc:
        return _fail(EXIT_USAGE, str(exc))


if __name__ == "__main__":
    sys.exit(main())
