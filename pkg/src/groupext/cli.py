"""Command-line surface: check, gen, lift, verify, eval.

Exit codes partition the outcomes so shell pipelines can branch without
parsing JSON:

    0  decided (extreme or not extreme; verify: certificate valid)
    1  I/O or parse error
    2  input is not minimal
    3  inconclusive (minimal, but the theory's hypotheses do not apply)
    4  certificate does not verify
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import generators
from .driver import (
    Extremality,
    Mode,
    NotExtremeCertificate,
    decide,
    verify_certificate,
)
from .geometry import GridPoint, TorusPoint
from .piecewise import as_resolution_one, refine
from .serialize import (
    FormatError,
    dump_certificate,
    dump_function,
    dump_one_d,
    fmt_rat,
    load_certificate,
    load_function,
    load_one_d,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_MINIMAL = 2
EXIT_INCONCLUSIVE = 3
EXIT_INVALID_CERTIFICATE = 4


def worker_limit() -> int:
    """Parallelism cap from GROUPEXT_THREADS (0 or unset = automatic).

    The current implementation runs single-process; the cap is validated
    and honoured trivially, and exists so batch drivers can rely on it.
    """
    raw = os.environ.get("GROUPEXT_THREADS", "0")
    try:
        limit = int(raw)
    except ValueError:
        raise FormatError("GROUPEXT_THREADS", f"not an integer: {raw!r}") from None
    if limit < 0:
        raise FormatError("GROUPEXT_THREADS", "must be >= 0")
    return limit if limit > 0 else 1


def exit_code_for(verdict) -> int:
    if not verdict.minimal:
        return EXIT_NOT_MINIMAL
    if verdict.extreme == Extremality.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _fail(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return EXIT_ERROR


def _cmd_check(args) -> int:
    try:
        pl = load_function(_read(args.input))
    except (OSError, FormatError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    worker_limit()

    verdict = decide(pl, Mode(args.mode))
    out = {
        "minimal": verdict.minimal,
        "diagonally_constrained": verdict.diagonally_constrained,
        "extreme": verdict.extreme.value,
        "path": verdict.path.value,
        "certificate": None,
        "timings": {k: round(v, 6) for k, v in sorted(verdict.timings.items())},
    }
    if verdict.certificate is not None:
        out["certificate"] = (
            "not_extreme"
            if isinstance(verdict.certificate, NotExtremeCertificate)
            else "extreme"
        )
    if not verdict.minimal and verdict.report is not None:
        out["violations"] = [
            {
                "kind": v.kind,
                "witness": [[p.i, p.j] for p in v.witness],
                "slack": fmt_rat(v.slack),
            }
            for v in verdict.report.violations[:10]
        ]

    if args.heatmap:
        try:
            _write_heatmap(pl, args.heatmap)
        except OSError as exc:
            return _fail(str(exc))

    if args.certificate and verdict.certificate is not None:
        try:
            _write(args.certificate, dump_certificate(verdict.certificate))
        except OSError as exc:
            return _fail(str(exc))

    _emit(out)
    return exit_code_for(verdict)


def _write_heatmap(pl, path: str) -> None:
    """Symmetry-slice slack: one row per fine lattice point u, at v = f - u."""
    pl = as_resolution_one(pl)
    fine = refine(pl)
    size = fine.grid_size
    fg = fine.f_grid
    lines = ["u_i,u_j,v_i,v_j,delta"]
    for i in range(size):
        for j in range(size):
            vi = (fg.i - i) % size
            vj = (fg.j - j) % size
            d = fine.grid_delta(i, j, vi, vj)
            lines.append(f"{i},{j},{vi},{vj},{fmt_rat(d)}")
    _write(path, "\n".join(lines) + "\n")


def _cmd_gen(args) -> int:
    if args.family == "gmic":
        if args.q is None or args.f is None:
            return _fail("gen gmic needs --q and --f")
        try:
            zeta = generators.gmic(args.q, Fraction(args.f))
        except (ValueError, ZeroDivisionError) as exc:
            return _fail(str(exc))
    else:
        zeta = generators.averaged_pair_zeta()
    text = dump_one_d(zeta)
    try:
        _write(args.output, text)
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_OK


def _cmd_lift(args) -> int:
    try:
        zeta = load_one_d(_read(args.input))
    except (OSError, FormatError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    pl = generators.diagonal_lift(zeta)
    try:
        _write(args.output, dump_function(pl))
    except OSError as exc:
        return _fail(str(exc))
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        pl = load_function(_read(args.function))
        cert = load_certificate(_read(args.certificate))
    except (OSError, FormatError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    result = verify_certificate(pl, cert)
    _emit({"valid": result.ok, "reasons": list(result.reasons)})
    return EXIT_OK if result.ok else EXIT_INVALID_CERTIFICATE


def _cmd_eval(args) -> int:
    try:
        pl = load_function(_read(args.function))
    except (OSError, FormatError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    parts = args.point.split(",")
    if len(parts) != 2:
        return _fail(f"point must be 'x1,x2', got {args.point!r}")
    try:
        p = TorusPoint(Fraction(parts[0]), Fraction(parts[1]))
    except (ValueError, ZeroDivisionError) as exc:
        return _fail(f"bad point {args.point!r}: {exc}")
    sys.stdout.write(fmt_rat(pl.eval(p)) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupext",
        description="Exact extremality testing for piecewise linear functions on the torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide extremality of a function file")
    p_check.add_argument("input")
    p_check.add_argument(
        "--mode", choices=[m.value for m in Mode], default=Mode.FAST.value
    )
    p_check.add_argument("--certificate", help="write the certificate JSON here")
    p_check.add_argument("--heatmap", help="write the symmetry-slice slack CSV here")
    p_check.set_defaults(func=_cmd_check)

    p_gen = sub.add_parser("gen", help="write a one-dimensional seed file")
    p_gen.add_argument("family", choices=["gmic", "averaged-pair"])
    p_gen.add_argument("--q", type=int)
    p_gen.add_argument("--f", help="reference breakpoint, e.g. 1/4")
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_lift = sub.add_parser("lift", help="lift a 1D seed to a function file")
    p_lift.add_argument("input")
    p_lift.add_argument("output")
    p_lift.set_defaults(func=_cmd_lift)

    p_verify = sub.add_parser("verify", help="check a certificate against a function")
    p_verify.add_argument("--function", required=True)
    p_verify.add_argument("--certificate", required=True)
    p_verify.set_defaults(func=_cmd_verify)

    p_eval = sub.add_parser("eval", help="evaluate a function at a rational point")
    p_eval.add_argument("function")
    p_eval.add_argument("--point", required=True, help="'x1,x2' with rational entries")
    p_eval.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
