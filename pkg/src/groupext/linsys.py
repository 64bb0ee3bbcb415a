"""The finite linear system of a minimal function and its exact kernel.

Any midpoint decomposition of the function must satisfy, on the chosen
lattice, the value constraints at the origin and at f together with one
additivity equation per lattice pair with zero slack.  The function is
then extreme (under the hypotheses established elsewhere) exactly when
the homogenised system -- origin and f pinned to zero plus all additivity
rows -- has a trivial kernel.

The kernel is computed exactly over the rationals.  Because the system
has few variables but a vast number of heavily redundant rows, candidate
pivot rows are preselected with a single modular elimination pass; the
selected rows are then eliminated exactly, and every candidate kernel
vector is verified against *all* rows, pulling any violated row into the
exact elimination and repeating.  The fixpoint is reached after finitely
many rounds and the result is independent of the modulus: a vector is
reported only if it annihilates every row, and the selected rows are
provably independent, so the reported dimension is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Rat
from .piecewise import PLFunction, SlackTable, refine

_PRIME = (1 << 31) - 1
ZERO = Rat(0)


@dataclass(frozen=True)
class LinRow:
    """Sparse equation: sum of coeff * var = rhs, with its origin recorded."""

    coeffs: tuple[tuple[int, int], ...]  # (variable, integer coefficient)
    rhs: Rat
    tag: tuple


@dataclass(frozen=True)
class LinSystem:
    q: int
    n: int
    size: int  # lattice points per axis
    variables: int
    rows: tuple[LinRow, ...]

    def var_index(self, i: int, j: int) -> int:
        return (i % self.size) * self.size + (j % self.size)


@dataclass(frozen=True)
class KernelReport:
    dimension: int
    rank: int
    variables: int
    basis: tuple[tuple[Rat, ...], ...]


def assemble(
    pl: PLFunction, n: int, table: SlackTable | None = None
) -> LinSystem:
    """Build the system on the 1/(n*q) lattice from the zero-slack pairs.

    One row per unordered additive pair; the origin row subsumes the unit
    translates, which coincide with the origin on the torus.
    """
    if pl.n != 1:
        raise ValueError("assemble expects a resolution-1 function")
    if n not in (1, 4):
        raise ValueError("resolution must be 1 or 4")
    fine = pl if n == 1 else refine(pl)
    if table is None:
        table = SlackTable(fine)
    elif table.size != fine.grid_size:
        raise ValueError("slack table resolution does not match")
    size = fine.grid_size
    variables = size * size

    fg = fine.f_grid
    f_idx = fg.i * size + fg.j

    rows: list[LinRow] = [
        LinRow(((0, 1),), Rat(0), ("origin",)),
        LinRow(((f_idx, 1),), Rat(1), ("f",)),
    ]
    for a, b in table.zero_pairs:
        ai, aj = divmod(a, size)
        bi, bj = divmod(b, size)
        w = ((ai + bi) % size) * size + (aj + bj) % size
        acc: dict[int, int] = {}
        for var, c in ((a, 1), (b, 1), (w, -1)):
            acc[var] = acc.get(var, 0) + c
        coeffs = tuple(sorted((v, c) for v, c in acc.items() if c != 0))
        if not coeffs:
            continue
        rows.append(LinRow(coeffs, Rat(0), ("additivity", a, b)))
    return LinSystem(pl.q, n, size, variables, tuple(rows))


def _mod_insert(pivots: dict[int, dict[int, int]], row: dict[int, int]) -> bool:
    """Reduce a row against the modular echelon; install it if it survives."""
    while row:
        lead = min(row)
        pivot = pivots.get(lead)
        if pivot is None:
            inv = pow(row[lead], _PRIME - 2, _PRIME)
            pivots[lead] = {c: (v * inv) % _PRIME for c, v in row.items()}
            return True
        factor = row[lead]
        for c, v in pivot.items():
            nv = (row.get(c, 0) - factor * v) % _PRIME
            if nv:
                row[c] = nv
            else:
                row.pop(c, None)
    return False


def _exact_insert(pivots: dict[int, dict[int, Rat]], row: dict[int, Rat]) -> bool:
    while row:
        lead = min(row)
        pivot = pivots.get(lead)
        if pivot is None:
            inv = 1 / row[lead]
            pivots[lead] = {c: v * inv for c, v in row.items()}
            return True
        factor = row[lead]
        for c, v in pivot.items():
            nv = row.get(c, ZERO) - factor * v
            if nv:
                row[c] = nv
            else:
                row.pop(c, None)
    return False


def _kernel_basis(
    pivots: dict[int, dict[int, Rat]], variables: int
) -> list[list[Rat]]:
    """Back-substitute one basis vector per free variable."""
    free = [c for c in range(variables) if c not in pivots]
    basis = []
    for cf in free:
        vec = [ZERO] * variables
        vec[cf] = Rat(1)
        for p in sorted(pivots, reverse=True):
            row = pivots[p]
            s = ZERO
            for c, v in row.items():
                if c != p and vec[c]:
                    s += v * vec[c]
            if s:
                vec[p] = -s
        basis.append(vec)
    return basis


def _row_dot(row: LinRow, vec: list[Rat]) -> Rat:
    s = ZERO
    for var, c in row.coeffs:
        if vec[var]:
            s += c * vec[var]
    return s


def kernel(sys: LinSystem) -> KernelReport:
    """Exact kernel of the homogenised system, deterministically normalised.

    Basis vectors are scaled so their lexicographically first non-zero
    coordinate is 1 and sorted by that coordinate's index.
    """
    mod_pivots: dict[int, dict[int, int]] = {}
    selected: list[LinRow] = []
    for row in sys.rows:
        mrow = {var: c % _PRIME for var, c in row.coeffs}
        if _mod_insert(mod_pivots, mrow):
            selected.append(row)

    exact_pivots: dict[int, dict[int, Rat]] = {}
    for row in selected:
        _exact_insert(exact_pivots, {var: Rat(c) for var, c in row.coeffs})

    while True:
        basis = _kernel_basis(exact_pivots, sys.variables)
        bad: list[LinRow] = []
        if basis:
            for row in sys.rows:
                if any(_row_dot(row, vec) != 0 for vec in basis):
                    bad.append(row)
        if not bad:
            break
        for row in bad:
            _exact_insert(exact_pivots, {var: Rat(c) for var, c in row.coeffs})

    rank = len(exact_pivots)
    normalised = []
    for vec in basis:
        first = next(k for k, v in enumerate(vec) if v)
        scale = 1 / vec[first]
        normalised.append(tuple(v * scale for v in vec))
    normalised.sort(key=lambda v: next(k for k, x in enumerate(v) if x))
    return KernelReport(
        dimension=sys.variables - rank,
        rank=rank,
        variables=sys.variables,
        basis=tuple(normalised),
    )
