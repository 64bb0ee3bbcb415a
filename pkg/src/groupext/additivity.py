"""Enumeration of additive face triples.

A triple of faces (I, J, K) is *valid* when K sits inside the mod-1
Minkowski sum of I and J and neither I, J nor K can be shrunk without
changing the pair set

    F(I, J, K) = {(x, y) : x in I, y in J, x + y mod 1 in K}.

A valid triple is *additive* for a function when the subadditivity slack
vanishes on all of F(I, J, K); because the slack is affine on F and every
vertex of F projects to lattice points, it is enough to check the fine
lattice pairs inside F.  The maximal additive triples exactly cover the
zero set of the slack, and a function is *diagonally constrained* when no
maximal triple uses a horizontal or vertical edge.

Everything here is translation covariant, so validity and the pair
sampling patterns are precomputed once per face-kind combination and
translated to each anchor during the main enumeration sweep.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .geometry import (
    Face,
    FaceKind,
    GridPoint,
    TorusPoint,
    all_faces,
    face_contains,
    grid_points_in_face,
    minkowski_diff_faces,
    minkowski_sum_faces,
    superfaces,
    translate_face,
)
from .piecewise import PLFunction, SlackTable, refine


@dataclass(frozen=True)
class Triple:
    I: Face
    J: Face
    K: Face

    def faces(self) -> tuple[Face, Face, Face]:
        return (self.I, self.J, self.K)

    def key(self) -> tuple:
        return (self.I, self.J, self.K)


@dataclass(frozen=True)
class AdditiveSet:
    """All additive valid triples of a function, plus the maximal ones."""

    q: int
    triples: tuple[Triple, ...]
    maximal: tuple[int, ...]  # indices into triples

    def maximal_triples(self) -> list[Triple]:
        return [self.triples[k] for k in self.maximal]


def is_valid_triple(I: Face, J: Face, K: Face, q: int) -> bool:
    """Validity via the three Minkowski containments.

    The decompositions are closed under subfaces, so face containment in
    the sum/difference is exactly membership in the returned face set.
    """
    return (
        K in minkowski_sum_faces(I, J, q)
        and I in minkowski_diff_faces(K, J, q)
        and J in minkowski_diff_faces(K, I, q)
    )


@lru_cache(maxsize=None)
def _valid_candidates(q: int, kind_i: FaceKind, kind_j: FaceKind) -> tuple:
    """Valid (kind_K, di, dj) for I@(0,0), J@(0,0); translation covariant."""
    I = Face(kind_i, 0, 0)
    J = Face(kind_j, 0, 0)
    out = []
    for K in minkowski_sum_faces(I, J, q):
        if I in minkowski_diff_faces(K, J, q) and J in minkowski_diff_faces(K, I, q):
            out.append((K.kind, K.i, K.j))
    return tuple(out)


@lru_cache(maxsize=None)
def _pair_offsets(
    q: int, kind_i: FaceKind, kind_j: FaceKind, kind_k: FaceKind, di: int, dj: int
) -> tuple:
    """Fine-lattice pair offsets (u in I, v in J, u+v in K) at canonical anchors.

    Offsets are relative to the anchors of I and J on the 4x lattice; the
    membership test runs on actual torus points so that small q, where
    cells wrap around the torus, is handled exactly.
    """
    I = Face(kind_i, 0, 0)
    J = Face(kind_j, 0, 0)
    K = Face(kind_k, di % q, dj % q)
    pts_i = grid_points_in_face(I, 4, q)
    pts_j = grid_points_in_face(J, 4, q)
    out = []
    for u in pts_i:
        for v in pts_j:
            w = u.oplus(v)
            if face_contains(K, w.torus(), q):
                out.append((u.i, u.j, v.i, v.j))
    return tuple(out)


def is_additive_triple(table: SlackTable, t: Triple, q: int) -> bool:
    """Zero slack at every sampled fine-lattice pair of F(I, J, K)."""
    size = table.size
    base_ui = 4 * t.I.i
    base_uj = 4 * t.I.j
    base_vi = 4 * t.J.i
    base_vj = 4 * t.J.j
    di = (t.K.i - t.I.i - t.J.i) % q
    dj = (t.K.j - t.I.j - t.J.j) % q
    offsets = _pair_offsets(q, t.I.kind, t.J.kind, t.K.kind, di, dj)
    if not offsets:
        return False
    for ui, uj, vi, vj in offsets:
        a = ((base_ui + ui) % size) * size + (base_uj + uj) % size
        b = ((base_vi + vi) % size) * size + (base_vj + vj) % size
        if table.delta_flat(a, b) != 0:
            return False
    return True


def enumerate_additive_triples(
    pl: PLFunction, table: SlackTable | None = None
) -> AdditiveSet:
    """All additive valid triples, lexicographically, plus the maximal set.

    The sweep is (I, J) in face order with K candidates in face order, so
    the output (and everything derived from it) is reproducible.
    """
    if pl.n != 1:
        raise ValueError("additivity enumeration expects a resolution-1 function")
    q = pl.q
    if table is None:
        table = SlackTable(refine(pl))
    faces = all_faces(q)
    triples: list[Triple] = []
    for I in faces:
        for J in faces:
            for kind_k, di, dj in _valid_candidates(q, I.kind, J.kind):
                K = Face(kind_k, (di + I.i + J.i) % q, (dj + J.j + I.j) % q)
                t = Triple(I, J, K)
                if is_additive_triple(table, t, q):
                    triples.append(t)
    maximal = _maximal_indices(triples, q)
    return AdditiveSet(q, tuple(triples), tuple(maximal))


def _maximal_indices(triples: list[Triple], q: int) -> list[int]:
    """Indices of triples with no componentwise-larger triple in the set.

    Enumerating componentwise superfaces is cheap: triangles only have
    themselves, so the dominant all-triangle triples cost nothing.
    """
    by_key = {t.key() for t in triples}
    out = []
    for idx, t in enumerate(triples):
        sup_i = superfaces(t.I, q)
        sup_j = superfaces(t.J, q)
        sup_k = superfaces(t.K, q)
        if len(sup_i) == len(sup_j) == len(sup_k) == 1:
            out.append(idx)
            continue
        key = t.key()
        dominated = False
        for cand in itertools.product(sup_i, sup_j, sup_k):
            if cand != key and cand in by_key:
                dominated = True
                break
        if not dominated:
            out.append(idx)
    return out


def is_diagonally_constrained(aset: AdditiveSet) -> tuple[bool, Triple | None]:
    """True when no maximal triple involves a horizontal or vertical edge.

    Returns the first offending maximal triple otherwise.
    """
    for idx in aset.maximal:
        t = aset.triples[idx]
        if any(f.is_axis_edge() for f in t.faces()):
            return False, t
    return True, None
