"""Finite minimality test for piecewise linear functions on the torus.

For a continuous function that is affine on every cell of its grid,
minimality as a cut-generating function reduces to finitely many exact
conditions on the lattice: value 0 at the origin, nonnegativity,
subadditivity over all lattice pairs, and the symmetry condition
pi(x) + pi(f - x) = 1.  The report collects every violation rather than
stopping at the first, so callers can use it for diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import GridPoint, Rat
from .piecewise import PLFunction


@dataclass(frozen=True)
class Violation:
    kind: str  # origin | nonneg | subadd | symmetry | f-not-vertex
    witness: tuple[GridPoint, ...]
    slack: Rat


@dataclass(frozen=True)
class MinimalityReport:
    minimal: bool
    violations: tuple[Violation, ...]


def check_minimality(pl: PLFunction) -> MinimalityReport:
    """Run all minimality conditions on the function's own lattice.

    Violations come back in deterministic order: condition by condition,
    witnesses lexicographic.  A resolution-4 function is checked over its
    fine lattice, which is the correct test for functions that are only
    piecewise linear at that resolution (certificate outputs, say).
    """
    size = pl.grid_size
    n, q = pl.n, pl.q
    vals = pl.values
    violations: list[Violation] = []

    def gp(i: int, j: int) -> GridPoint:
        return GridPoint(i, j, n, q)

    if vals[0][0] != 0:  # unreachable through the constructor; kept as a guard
        violations.append(Violation("origin", (gp(0, 0),), vals[0][0]))

    fi = pl.f.x1 * q
    fj = pl.f.x2 * q
    if fi.denominator != 1 or fj.denominator != 1:  # same: constructor guards this
        violations.append(Violation("f-not-vertex", (), Rat(0)))
        return MinimalityReport(False, tuple(violations))

    for i in range(size):
        for j in range(size):
            if vals[i][j] < 0:
                violations.append(Violation("nonneg", (gp(i, j),), vals[i][j]))

    flat = [vals[i][j] for i in range(size) for j in range(size)]
    n_points = size * size
    for a in range(n_points):
        ai, aj = divmod(a, size)
        va = flat[a]
        for b in range(a, n_points):
            bi, bj = divmod(b, size)
            d = va + flat[b] - flat[((ai + bi) % size) * size + (aj + bj) % size]
            if d < 0:
                violations.append(Violation("subadd", (gp(ai, aj), gp(bi, bj)), d))

    fgi = int(fi) * n
    fgj = int(fj) * n
    for i in range(size):
        for j in range(size):
            s = vals[i][j] + vals[(fgi - i) % size][(fgj - j) % size] - 1
            if s != 0:
                violations.append(Violation("symmetry", (gp(i, j),), s))

    return MinimalityReport(not violations, tuple(violations))
