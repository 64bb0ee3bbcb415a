"""The two explicit perturbations on the 4x-refined grid, and pair assembly.

Both constructions are odd under point reflection through any coarse
lattice point and invariant under coarse translations, which is exactly
what makes them respect every additivity relation of the input:

* the *bump* takes value +-1 on the three fine vertices interior to each
  lower/upper triangle and 0 on every other fine vertex; restricted to the
  open triangles of one graph component it perturbs the function without
  breaking subadditivity or symmetry;

* the *diagonal wave* depends only on the residue of x1 + x2 modulo the
  coarse spacing (values 1, 0, -1, 0 on the four fine residues); it
  vanishes on all diagonal lines of the coarse complex and is additionally
  invariant under any translation preserving those lines.

A perturbation scaled by a third of the minimum positive slack yields the
two distinct minimal functions whose average is the input.
"""

from __future__ import annotations

from enum import Enum

from .geometry import Face, FaceKind, GridPoint, Rat, make_face
from .piecewise import PLFunction, refine


class PerturbationKind(Enum):
    BUMP = "psi"
    WAVE = "phi"
    KERNEL = "kernel"


_BUMP_CORE = {(1, 1), (2, 1), (1, 2)}


def bump_value(p: GridPoint) -> Rat:
    """+1 at interior fine vertices of lower cells, -1 upper, 0 on boundaries.

    Computed by reducing into one coarse cell and reflecting the upper half
    through the cell centre, so the translation/reflection identities hold
    by construction.
    """
    if p.n != 4:
        raise ValueError("bump values live on the resolution-4 grid")
    a = p.i % 4
    b = p.j % 4
    if a + b <= 4:
        return Rat(1) if (a, b) in _BUMP_CORE else Rat(0)
    return -Rat(1) if (4 - a, 4 - b) in _BUMP_CORE else Rat(0)


def diagonal_wave_value(p: GridPoint) -> Rat:
    """1, 0, -1, 0 according to the fine residue of x1 + x2."""
    if p.n != 4:
        raise ValueError("wave values live on the resolution-4 grid")
    r = (p.i + p.j) % 4
    if r == 1:
        return Rat(1)
    if r == 3:
        return Rat(-1)
    return Rat(0)


def _interior_triangle(i: int, j: int, q: int) -> Face | None:
    """The triangle whose open interior holds fine vertex (i, j), if any."""
    a = i % 4
    b = j % 4
    ci, cj = i // 4, j // 4
    if 1 <= a and 1 <= b and a + b <= 3:
        return make_face(FaceKind.TRI_LOWER, ci, cj, q)
    if a <= 3 and b <= 3 and a + b >= 5:
        return make_face(FaceKind.TRI_UPPER, ci, cj, q)
    return None


def _closed_triangles(i: int, j: int, q: int) -> set[Face]:
    """All triangles whose closure holds fine vertex (i, j)."""
    out = set()
    for dx in (0, -1):
        for dy in (0, -1):
            a = i % 4 - 4 * dx
            b = j % 4 - 4 * dy
            if not (0 <= a <= 4 and 0 <= b <= 4):
                continue
            ci, cj = i // 4 + dx, j // 4 + dy
            if a + b <= 4:
                out.add(make_face(FaceKind.TRI_LOWER, ci, cj, q))
            if a + b >= 4:
                out.add(make_face(FaceKind.TRI_UPPER, ci, cj, q))
    return out


def _check_component(component) -> frozenset:
    comp = frozenset(component)
    if not comp:
        raise ValueError("perturbation needs a non-empty triangle component")
    if not all(f.is_triangle() for f in comp):
        raise ValueError("component must consist of triangles")
    return comp


def build_bump_perturbation(pl: PLFunction, component) -> PLFunction:
    """Bump values on the open triangles of the component, zero elsewhere.

    Continuity is free: the bump vanishes on every cell boundary, so the
    indicator of a union of open triangles changes nothing at shared
    vertices.
    """
    comp = _check_component(component)
    q = pl.q
    size = 4 * q
    vals = [[Rat(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            tri = _interior_triangle(i, j, q)
            if tri is not None and tri in comp:
                vals[i][j] = bump_value(GridPoint(i, j, 4, q))
    return PLFunction(q, 4, pl.f, tuple(tuple(r) for r in vals))


def build_wave_perturbation(pl: PLFunction, component) -> PLFunction:
    """Wave values on the closed triangles of the component, zero elsewhere.

    The wave is already zero on the residues shared with triangles outside
    the component's diagonal strips, so taking closed triangles matches
    restricting to the component minus those lines.
    """
    comp = _check_component(component)
    q = pl.q
    size = 4 * q
    vals = [[Rat(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if _closed_triangles(i, j, q) & comp:
                vals[i][j] = diagonal_wave_value(GridPoint(i, j, 4, q))
    return PLFunction(q, 4, pl.f, tuple(tuple(r) for r in vals))


def make_pair(
    pl: PLFunction, perturbation: PLFunction, eps: Rat
) -> tuple[PLFunction, PLFunction]:
    """The pair pl +- (eps/3) * perturbation, both on the fine grid.

    Their exact average is pl; they differ as long as the perturbation is
    not identically zero, which is rejected here.
    """
    if perturbation.n != 4 or perturbation.q != pl.q:
        raise ValueError("perturbation must live on the 4x grid of the function")
    if all(v == 0 for row in perturbation.values for v in row):
        raise ValueError("perturbation vanishes at every grid vertex")
    base = refine(pl) if pl.n == 1 else pl
    amp = Rat(eps) / 3
    return scaled_pair(base, perturbation, amp)


def scaled_pair(
    base: PLFunction, perturbation: PLFunction, amp: Rat
) -> tuple[PLFunction, PLFunction]:
    size = base.grid_size
    up = [
        [base.values[i][j] + amp * perturbation.values[i][j] for j in range(size)]
        for i in range(size)
    ]
    down = [
        [base.values[i][j] - amp * perturbation.values[i][j] for j in range(size)]
        for i in range(size)
    ]
    hi = PLFunction(base.q, base.n, base.f, tuple(tuple(r) for r in up))
    lo = PLFunction(base.q, base.n, base.f, tuple(tuple(r) for r in down))
    return hi, lo
