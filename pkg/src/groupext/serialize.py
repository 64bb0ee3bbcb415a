"""Exact JSON formats for functions, one-dimensional seeds and certificates.

Rationals travel as strings "p/r" in lowest terms ("0", "3", "-1/4"), so a
file round-trips bit-exactly through any JSON implementation and nothing
is ever coerced to floating point.  Diagnostics name the offending field.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .driver import (
    Certificate,
    ExtremeCertificate,
    NotExtremeCertificate,
)
from .generators import OneDFunction
from .geometry import Rat, TorusPoint
from .perturb import PerturbationKind
from .piecewise import PLFunction

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """Malformed input file; the message carries the field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def fmt_rat(x: Rat) -> str:
    return str(Fraction(x))


def parse_rat(s, field: str) -> Rat:
    if not isinstance(s, str):
        raise FormatError(field, f"expected a rational string, got {type(s).__name__}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(field, f"not a rational: {s!r} ({exc})") from None


def _require(obj: dict, key: str, ctx: str):
    if key not in obj:
        raise FormatError(f"{ctx}.{key}" if ctx else key, "missing field")
    return obj[key]


def _check_schema(obj: dict, ctx: str) -> None:
    version = _require(obj, "schema_version", ctx)
    if version != SCHEMA_VERSION:
        raise FormatError(
            f"{ctx}.schema_version" if ctx else "schema_version",
            f"unsupported version {version!r}",
        )


# -- functions --------------------------------------------------------------


def function_to_obj(pl: PLFunction) -> dict:
    size = pl.grid_size
    values = {
        f"{i},{j}": fmt_rat(pl.values[i][j]) for i in range(size) for j in range(size)
    }
    return {
        "schema_version": SCHEMA_VERSION,
        "q": pl.q,
        "resolution": pl.n,
        "f": [fmt_rat(pl.f.x1), fmt_rat(pl.f.x2)],
        "values": values,
    }


def function_from_obj(obj: dict, ctx: str = "") -> PLFunction:
    if not isinstance(obj, dict):
        raise FormatError(ctx or "<root>", "expected an object")
    _check_schema(obj, ctx)
    q = _require(obj, "q", ctx)
    if not isinstance(q, int) or q < 1:
        raise FormatError(f"{ctx}.q" if ctx else "q", f"bad value {q!r}")
    n = _require(obj, "resolution", ctx)
    if n not in (1, 4):
        raise FormatError(
            f"{ctx}.resolution" if ctx else "resolution", f"must be 1 or 4, got {n!r}"
        )
    fobj = _require(obj, "f", ctx)
    fctx = f"{ctx}.f" if ctx else "f"
    if not isinstance(fobj, list) or len(fobj) != 2:
        raise FormatError(fctx, "expected a pair of rational strings")
    f = TorusPoint(parse_rat(fobj[0], fctx), parse_rat(fobj[1], fctx))

    vobj = _require(obj, "values", ctx)
    vctx = f"{ctx}.values" if ctx else "values"
    if not isinstance(vobj, dict):
        raise FormatError(vctx, "expected an object keyed by 'i,j'")
    size = n * q
    grid: list[list] = [[None] * size for _ in range(size)]
    for key, raw in vobj.items():
        parts = key.split(",")
        if len(parts) != 2:
            raise FormatError(f"{vctx}[{key!r}]", "key must be 'i,j'")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"{vctx}[{key!r}]", "key must be 'i,j'") from None
        if not (0 <= i < size and 0 <= j < size):
            raise FormatError(f"{vctx}[{key!r}]", f"index outside the {size}x{size} grid")
        if grid[i][j] is not None:
            raise FormatError(f"{vctx}[{key!r}]", "duplicate grid point")
        grid[i][j] = parse_rat(raw, f"{vctx}[{key!r}]")
    for i in range(size):
        for j in range(size):
            if grid[i][j] is None:
                raise FormatError(vctx, f"missing value for grid point '{i},{j}'")
    if grid[0][0] != 0:
        raise FormatError(f"{vctx}['0,0']", "value at the origin must be 0")
    try:
        return PLFunction(q, n, f, tuple(tuple(row) for row in grid))
    except ValueError as exc:
        raise FormatError(ctx or "<root>", str(exc)) from None


def dump_function(pl: PLFunction) -> str:
    return json.dumps(function_to_obj(pl), indent=2) + "\n"


def load_function(text: str) -> PLFunction:
    return function_from_obj(json.loads(text))


# -- one-dimensional seeds ---------------------------------------------------


def one_d_to_obj(zeta: OneDFunction) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "q": zeta.q,
        "f0": fmt_rat(zeta.f0),
        "values": [fmt_rat(v) for v in zeta.values],
    }


def one_d_from_obj(obj: dict) -> OneDFunction:
    if not isinstance(obj, dict):
        raise FormatError("<root>", "expected an object")
    _check_schema(obj, "")
    q = _require(obj, "q", "")
    if not isinstance(q, int) or q < 1:
        raise FormatError("q", f"bad value {q!r}")
    f0 = parse_rat(_require(obj, "f0", ""), "f0")
    raw = _require(obj, "values", "")
    if not isinstance(raw, list) or len(raw) != q:
        raise FormatError("values", f"expected a list of {q} rational strings")
    values = tuple(parse_rat(v, f"values[{k}]") for k, v in enumerate(raw))
    try:
        return OneDFunction(q, f0, values)
    except ValueError as exc:
        raise FormatError("<root>", str(exc)) from None


def dump_one_d(zeta: OneDFunction) -> str:
    return json.dumps(one_d_to_obj(zeta), indent=2) + "\n"


def load_one_d(text: str) -> OneDFunction:
    return one_d_from_obj(json.loads(text))


# -- certificates -------------------------------------------------------------


def certificate_to_obj(cert: Certificate) -> dict:
    if isinstance(cert, NotExtremeCertificate):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "not_extreme",
            "construction": cert.construction,
            "epsilon": fmt_rat(cert.epsilon),
            "pi1": function_to_obj(cert.pi1),
            "pi2": function_to_obj(cert.pi2),
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "extreme",
        "kernel_dimension": cert.kernel_dimension,
        "rank": cert.rank,
        "variables": cert.variables,
        "resolution": cert.resolution,
    }


def certificate_from_obj(obj: dict) -> Certificate:
    if not isinstance(obj, dict):
        raise FormatError("<root>", "expected an object")
    _check_schema(obj, "")
    kind = _require(obj, "kind", "")
    if kind == "not_extreme":
        construction = _require(obj, "construction", "")
        try:
            pk = PerturbationKind(construction)
        except ValueError:
            raise FormatError(
                "construction", f"must be psi, phi or kernel, got {construction!r}"
            ) from None
        eps = parse_rat(_require(obj, "epsilon", ""), "epsilon")
        pi1 = function_from_obj(_require(obj, "pi1", ""), "pi1")
        pi2 = function_from_obj(_require(obj, "pi2", ""), "pi2")
        return NotExtremeCertificate(pi1, pi2, pk, eps)
    if kind == "extreme":
        dim = _require(obj, "kernel_dimension", "")
        rank = _require(obj, "rank", "")
        variables = _require(obj, "variables", "")
        resolution = _require(obj, "resolution", "")
        for name, v in (
            ("kernel_dimension", dim),
            ("rank", rank),
            ("variables", variables),
        ):
            if not isinstance(v, int) or v < 0:
                raise FormatError(name, f"bad value {v!r}")
        if resolution not in (1, 4):
            raise FormatError("resolution", f"must be 1 or 4, got {resolution!r}")
        return ExtremeCertificate(dim, rank, variables, resolution)
    raise FormatError("kind", f"must be not_extreme or extreme, got {kind!r}")


def dump_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_obj(cert), indent=2) + "\n"


def load_certificate(text: str) -> Certificate:
    return certificate_from_obj(json.loads(text))
