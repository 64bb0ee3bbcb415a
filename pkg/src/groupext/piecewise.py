"""Continuous piecewise linear functions stored as exact grid values.

A function is affine on every triangle of the resolution-n complex (cells
of side 1/(n*q)) and is determined by its values on the 1/(n*q) lattice.
The subadditivity slack

    slack(u, v) = f(u) + f(v) - f(u + v mod 1)

drives everything downstream; `SlackTable` materialises it once per
function and resolution because the additivity enumeration and the linear
system both query it heavily.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import ZERO, GridPoint, Rat, TorusPoint


class EverywhereAdditiveError(ValueError):
    """Raised when a function has no positive subadditivity slack at all."""


@dataclass(frozen=True)
class PLFunction:
    """Vertex-value representation of a continuous piecewise linear function.

    values[i][j] is the value at (i/(n*q), j/(n*q)).  The origin value must
    be 0 and the reference point f must lie on the coarse 1/q lattice;
    both are construction-time errors otherwise.
    """

    q: int
    n: int
    f: TorusPoint
    values: tuple[tuple[Rat, ...], ...]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be positive")
        if self.n not in (1, 4):
            raise ValueError("resolution must be 1 or 4")
        size = self.grid_size
        vals = tuple(tuple(Rat(v) for v in row) for row in self.values)
        if len(vals) != size or any(len(row) != size for row in vals):
            raise ValueError(f"values must form a {size}x{size} grid")
        object.__setattr__(self, "values", vals)
        if vals[0][0] != 0:
            raise ValueError("value at the origin must be 0")
        fi = self.f.x1 * self.q
        fj = self.f.x2 * self.q
        if fi.denominator != 1 or fj.denominator != 1:
            raise ValueError(f"f = {self.f} is not a vertex of the 1/{self.q} grid")

    @property
    def grid_size(self) -> int:
        return self.n * self.q

    @property
    def f_grid(self) -> GridPoint:
        return GridPoint.from_torus(self.f, self.n, self.q)

    @property
    def values_in_unit_range(self) -> bool:
        return all(0 <= v <= 1 for row in self.values for v in row)

    def value_at(self, i: int, j: int) -> Rat:
        size = self.grid_size
        return self.values[i % size][j % size]

    def eval(self, p: TorusPoint) -> Rat:
        """Affine interpolation over the triangle of the fine grid holding p."""
        size = self.grid_size
        s1 = p.x1 * size
        s2 = p.x2 * size
        i = s1.numerator // s1.denominator
        j = s2.numerator // s2.denominator
        a = s1 - i
        b = s2 - j
        v00 = self.value_at(i, j)
        v10 = self.value_at(i + 1, j)
        v01 = self.value_at(i, j + 1)
        if a + b <= 1:
            return v00 + a * (v10 - v00) + b * (v01 - v00)
        v11 = self.value_at(i + 1, j + 1)
        return v11 + (1 - b) * (v10 - v11) + (1 - a) * (v01 - v11)

    def delta(self, u: TorusPoint, v: TorusPoint) -> Rat:
        """Exact subadditivity slack at an arbitrary pair of torus points."""
        return self.eval(u) + self.eval(v) - self.eval(u.oplus(v))

    def grid_delta(self, ui: int, uj: int, vi: int, vj: int) -> Rat:
        size = self.grid_size
        return (
            self.values[ui % size][uj % size]
            + self.values[vi % size][vj % size]
            - self.values[(ui + vi) % size][(uj + vj) % size]
        )


def delta(pl: PLFunction, u: TorusPoint, v: TorusPoint) -> Rat:
    return pl.delta(u, v)


def refine(pl: PLFunction) -> PLFunction:
    """Re-sample onto the 4x finer lattice; the function itself is unchanged."""
    if pl.n != 1:
        raise ValueError("refine expects a resolution-1 function")
    size = 4 * pl.q
    vals = [
        [pl.eval(TorusPoint(Fraction(i, size), Fraction(j, size))) for j in range(size)]
        for i in range(size)
    ]
    return PLFunction(pl.q, 4, pl.f, tuple(tuple(row) for row in vals))


def as_resolution_one(pl: PLFunction) -> PLFunction:
    """Reinterpret a fine-grid function over the complex with q' = n*q."""
    if pl.n == 1:
        return pl
    return PLFunction(pl.q * pl.n, 1, pl.f, pl.values)


class SlackTable:
    """All pairwise slacks of a function on its own lattice.

    Pairs are packed as a*M + b with flat indices a <= b (the slack is
    symmetric).  Exposes the zero set (the additive pairs, in packed
    order) and the minimum positive slack.
    """

    def __init__(self, pl: PLFunction):
        self.pl = pl
        self.size = pl.grid_size
        n_points = self.size * self.size
        self.n_points = n_points
        flat: list[Rat] = [ZERO] * n_points
        size = self.size
        for i in range(size):
            row = pl.values[i]
            base = i * size
            for j in range(size):
                flat[base + j] = row[j]
        self.flat = flat

        table: dict[int, Rat] = {}
        zero_pairs: list[tuple[int, int]] = []
        min_pos: Rat | None = None
        for a in range(n_points):
            ai, aj = divmod(a, size)
            va = flat[a]
            key_base = a * n_points
            for b in range(a, n_points):
                bi, bj = divmod(b, size)
                w = ((ai + bi) % size) * size + (aj + bj) % size
                d = va + flat[b] - flat[w]
                table[key_base + b] = d
                if d == 0:
                    zero_pairs.append((a, b))
                elif d > 0 and (min_pos is None or d < min_pos):
                    min_pos = d
        self.table = table
        self.zero_pairs = zero_pairs
        self._min_pos = min_pos

    def delta_flat(self, a: int, b: int) -> Rat:
        if a > b:
            a, b = b, a
        return self.table[a * self.n_points + b]

    def flat_index(self, i: int, j: int) -> int:
        return (i % self.size) * self.size + (j % self.size)

    def delta_points(self, u: GridPoint, v: GridPoint) -> Rat:
        size = self.size
        return self.delta_flat(u.i * size + u.j, v.i * size + v.j)

    @property
    def min_positive(self) -> Rat:
        if self._min_pos is None:
            raise EverywhereAdditiveError(
                "function is additive at every grid pair; no positive slack exists"
            )
        return self._min_pos


def min_positive_slack(pl: PLFunction) -> Rat:
    """Minimum positive slack over all pairs of the 4x-refined lattice.

    For a subadditive function this is a safe amplitude bound for the
    perturbation constructions: every non-additive fine-grid pair keeps a
    slack of at least this value.
    """
    fine = refine(pl) if pl.n == 1 else pl
    return SlackTable(fine).min_positive
