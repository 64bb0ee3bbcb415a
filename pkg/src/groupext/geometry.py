"""Exact geometry of the periodic triangulation of the unit torus.

The square [0,1)^2 with coordinates mod 1 is cut by the horizontal,
vertical and slope -1 lines through the points of (1/q)Z^2.  The cells of
the resulting complex are, per anchor cell (i,j):

  * one vertex, one horizontal / vertical / diagonal edge, and
  * a lower and an upper triangle of side 1/q,

6*q^2 faces in total.  All coordinates are `fractions.Fraction`; nothing
in this module (or anywhere downstream of it) touches floating point, so
every comparison and every zero test is exact.

Faces are identified by (kind, anchor) with the anchor taken mod q.  The
mod-1 Minkowski sum and difference of two faces decompose into unions of
faces; the decomposition is computed on representatives in [0,2]^2 and
reduced, which is valid because the sum of two faces is itself a union of
faces of the (infinite, periodic) complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache

#: Exact rational scalar used throughout the package.
Rat = Fraction

ZERO = Rat(0)
ONE = Rat(1)


def _mod1(x: Rat) -> Rat:
    return x - (x.numerator // x.denominator)


class FaceKind(IntEnum):
    """Face kinds, ordered so (kind, i, j) sorts faces deterministically."""

    VERTEX = 0
    EDGE_H = 1
    EDGE_V = 2
    EDGE_D = 3
    TRI_LOWER = 4
    TRI_UPPER = 5


EDGE_KINDS = (FaceKind.EDGE_H, FaceKind.EDGE_V, FaceKind.EDGE_D)
TRI_KINDS = (FaceKind.TRI_LOWER, FaceKind.TRI_UPPER)
AXIS_EDGE_KINDS = (FaceKind.EDGE_H, FaceKind.EDGE_V)

# Vertices of each kind in cell-local coordinates (cell side scaled to 1).
_LOCAL_VERTS = {
    FaceKind.VERTEX: ((0, 0),),
    FaceKind.EDGE_H: ((0, 0), (1, 0)),
    FaceKind.EDGE_V: ((0, 0), (0, 1)),
    FaceKind.EDGE_D: ((1, 0), (0, 1)),
    FaceKind.TRI_LOWER: ((0, 0), (1, 0), (0, 1)),
    FaceKind.TRI_UPPER: ((1, 0), (0, 1), (1, 1)),
}


@dataclass(frozen=True, order=True)
class TorusPoint:
    """A point of [0,1)^2; addition and subtraction wrap mod 1."""

    x1: Rat
    x2: Rat

    def __post_init__(self):
        object.__setattr__(self, "x1", _mod1(Rat(self.x1)))
        object.__setattr__(self, "x2", _mod1(Rat(self.x2)))

    def oplus(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.x1 + other.x1, self.x2 + other.x2)

    def ominus(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.x1 - other.x1, self.x2 - other.x2)

    def neg(self) -> "TorusPoint":
        return TorusPoint(-self.x1, -self.x2)

    def __add__(self, other):
        return self.oplus(other)

    def __sub__(self, other):
        return self.ominus(other)


@dataclass(frozen=True, order=True)
class GridPoint:
    """Lattice point i/(n*q), j/(n*q) of the torus; indices live mod n*q."""

    i: int
    j: int
    n: int
    q: int

    def __post_init__(self):
        if self.n < 1 or self.q < 1:
            raise ValueError("resolution and q must be positive")
        size = self.n * self.q
        object.__setattr__(self, "i", self.i % size)
        object.__setattr__(self, "j", self.j % size)

    @property
    def size(self) -> int:
        return self.n * self.q

    def torus(self) -> TorusPoint:
        return TorusPoint(Rat(self.i, self.size), Rat(self.j, self.size))

    def oplus(self, other: "GridPoint") -> "GridPoint":
        self._check_compat(other)
        return GridPoint(self.i + other.i, self.j + other.j, self.n, self.q)

    def ominus(self, other: "GridPoint") -> "GridPoint":
        self._check_compat(other)
        return GridPoint(self.i - other.i, self.j - other.j, self.n, self.q)

    def _check_compat(self, other: "GridPoint") -> None:
        if (self.n, self.q) != (other.n, other.q):
            raise ValueError("grid points live on different grids")

    @staticmethod
    def from_torus(p: TorusPoint, n: int, q: int) -> "GridPoint":
        """Exact conversion; raises if p is not on the 1/(n*q) lattice."""
        size = n * q
        i = p.x1 * size
        j = p.x2 * size
        if i.denominator != 1 or j.denominator != 1:
            raise ValueError(f"point {p} is not on the 1/{size} grid")
        return GridPoint(int(i), int(j), n, q)


@dataclass(frozen=True, order=True)
class Face:
    """A face of the complex: kind plus anchor cell indices (mod q)."""

    kind: FaceKind
    i: int
    j: int

    def is_triangle(self) -> bool:
        return self.kind in TRI_KINDS

    def is_edge(self) -> bool:
        return self.kind in EDGE_KINDS

    def is_vertex(self) -> bool:
        return self.kind == FaceKind.VERTEX

    def is_axis_edge(self) -> bool:
        return self.kind in AXIS_EDGE_KINDS

    def dim(self) -> int:
        if self.kind == FaceKind.VERTEX:
            return 0
        return 1 if self.is_edge() else 2


def make_face(kind: FaceKind, i: int, j: int, q: int) -> Face:
    return Face(kind, i % q, j % q)


def all_faces(q: int) -> list[Face]:
    """Every face of the complex, in (kind, i, j) order."""
    return [
        Face(kind, i, j)
        for kind in FaceKind
        for i in range(q)
        for j in range(q)
    ]


def triangles(q: int) -> list[Face]:
    return [Face(kind, i, j) for kind in TRI_KINDS for i in range(q) for j in range(q)]


def scaled_vertices(face: Face) -> tuple[tuple[int, int], ...]:
    """Representative vertices in cell units (multiply by 1/q for coordinates)."""
    return tuple(
        (face.i + dx, face.j + dy) for dx, dy in _LOCAL_VERTS[face.kind]
    )


def vertices_of(face: Face, q: int) -> tuple[TorusPoint, ...]:
    return tuple(
        TorusPoint(Rat(x, q), Rat(y, q)) for x, y in scaled_vertices(face)
    )


def barycenter(face: Face, q: int) -> TorusPoint:
    verts = scaled_vertices(face)
    k = len(verts)
    sx = sum(v[0] for v in verts)
    sy = sum(v[1] for v in verts)
    return TorusPoint(Rat(sx, k * q), Rat(sy, k * q))


def translate_face(face: Face, di: int, dj: int, q: int) -> Face:
    return Face(face.kind, (face.i + di) % q, (face.j + dj) % q)


_NEGATE = {
    FaceKind.VERTEX: (FaceKind.VERTEX, 0, 0),
    FaceKind.EDGE_H: (FaceKind.EDGE_H, -1, 0),
    FaceKind.EDGE_V: (FaceKind.EDGE_V, 0, -1),
    FaceKind.EDGE_D: (FaceKind.EDGE_D, -1, -1),
    FaceKind.TRI_LOWER: (FaceKind.TRI_UPPER, -1, -1),
    FaceKind.TRI_UPPER: (FaceKind.TRI_LOWER, -1, -1),
}


def negate_face(face: Face, q: int) -> Face:
    """The face {-x mod 1 : x in F}; again a face of the complex."""
    kind, di, dj = _NEGATE[face.kind]
    return Face(kind, (-face.i + di) % q, (-face.j + dj) % q)


def reflect_face(face: Face, ai: int, aj: int, q: int) -> Face:
    """The face {a - x mod 1 : x in F} for the vertex a = (ai/q, aj/q)."""
    neg = negate_face(face, q)
    return translate_face(neg, ai, aj, q)


def face_of(p: TorusPoint, q: int) -> Face:
    """Minimal face containing p (the face whose relative interior holds p)."""
    if q < 1:
        raise ValueError("q must be positive")
    s1 = p.x1 * q
    s2 = p.x2 * q
    i = s1.numerator // s1.denominator
    j = s2.numerator // s2.denominator
    a = s1 - i
    b = s2 - j
    if a == 0 and b == 0:
        return Face(FaceKind.VERTEX, i % q, j % q)
    if b == 0:
        return Face(FaceKind.EDGE_H, i % q, j % q)
    if a == 0:
        return Face(FaceKind.EDGE_V, i % q, j % q)
    s = a + b
    if s == 1:
        return Face(FaceKind.EDGE_D, i % q, j % q)
    if s < 1:
        return Face(FaceKind.TRI_LOWER, i % q, j % q)
    return Face(FaceKind.TRI_UPPER, i % q, j % q)


def face_contains(face: Face, p: TorusPoint, q: int) -> bool:
    """Membership of the torus point in the closed face, all wraps considered."""
    for z1, z2 in ((0, 0), (1, 0), (0, 1), (1, 1)):
        l1 = (p.x1 + z1) * q - face.i
        l2 = (p.x2 + z2) * q - face.j
        if _local_contains(face.kind, l1, l2):
            return True
    return False


def _local_contains(kind: FaceKind, l1: Rat, l2: Rat) -> bool:
    if kind == FaceKind.VERTEX:
        return l1 == 0 and l2 == 0
    if kind == FaceKind.EDGE_H:
        return l2 == 0 and 0 <= l1 <= 1
    if kind == FaceKind.EDGE_V:
        return l1 == 0 and 0 <= l2 <= 1
    if kind == FaceKind.EDGE_D:
        return l1 + l2 == 1 and 0 <= l1 <= 1
    if kind == FaceKind.TRI_LOWER:
        return l1 >= 0 and l2 >= 0 and l1 + l2 <= 1
    return 0 <= l1 <= 1 and 0 <= l2 <= 1 and l1 + l2 >= 1


# ---------------------------------------------------------------------------
# Convex hull machinery for the Minkowski decomposition (exact, tiny inputs).


def _cross(o, a, b) -> Rat:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple]:
    """Monotone-chain hull; returns CCW vertices, degenerate cases included."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all collinear: keep the extreme pair
        return [pts[0], pts[-1]]
    return hull


def hull_contains(hull: list[tuple], p: tuple) -> bool:
    if len(hull) == 1:
        return tuple(p) == tuple(hull[0])
    if len(hull) == 2:
        a, b = hull
        if _cross(a, b, p) != 0:
            return False
        return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(
            a[1], b[1]
        ) <= p[1] <= max(a[1], b[1])
    for k in range(len(hull)):
        if _cross(hull[k], hull[(k + 1) % len(hull)], p) < 0:
            return False
    return True


_BARY_OFFSET = {
    FaceKind.VERTEX: (Rat(0), Rat(0)),
    FaceKind.EDGE_H: (Rat(1, 2), Rat(0)),
    FaceKind.EDGE_V: (Rat(0), Rat(1, 2)),
    FaceKind.EDGE_D: (Rat(1, 2), Rat(1, 2)),
    FaceKind.TRI_LOWER: (Rat(1, 3), Rat(1, 3)),
    FaceKind.TRI_UPPER: (Rat(2, 3), Rat(2, 3)),
}


@lru_cache(maxsize=None)
def _sum_offsets(kind_i: FaceKind, kind_j: FaceKind) -> tuple:
    """Decomposition of F(kind_i)@(0,0) + F(kind_j)@(0,0) into cover faces.

    Works in cell units on the universal cover, so the result is independent
    of q; offsets range over {0,1,2}^2.  A candidate face belongs to the
    decomposition exactly when its barycenter lies in the sum polygon: the
    sum is a union of faces, so a face is contained in it as soon as a
    relative-interior point is.
    """
    sums = [
        (a[0] + b[0], a[1] + b[1])
        for a in _LOCAL_VERTS[kind_i]
        for b in _LOCAL_VERTS[kind_j]
    ]
    hull = convex_hull(sums)
    out = []
    for kind in FaceKind:
        ox, oy = _BARY_OFFSET[kind]
        for a in range(3):
            for b in range(3):
                if hull_contains(hull, (a + ox, b + oy)):
                    out.append((kind, a, b))
    return tuple(out)


def minkowski_sum_faces(I: Face, J: Face, q: int) -> tuple[Face, ...]:
    """Faces whose union is the mod-1 Minkowski sum of the two faces.

    Closed under subfaces; sorted by (kind, i, j).
    """
    base_i = I.i + J.i
    base_j = I.j + J.j
    faces = {
        Face(kind, (base_i + a) % q, (base_j + b) % q)
        for kind, a, b in _sum_offsets(I.kind, J.kind)
    }
    return tuple(sorted(faces))


def minkowski_diff_faces(K: Face, J: Face, q: int) -> tuple[Face, ...]:
    """Faces covering {k - j mod 1}: reflect J through the origin, then sum."""
    return minkowski_sum_faces(K, negate_face(J, q), q)


# ---------------------------------------------------------------------------
# Lattice points, incidence, intersections.

_GRID_LOCAL_CACHE: dict[tuple[FaceKind, int], tuple] = {}


def _grid_local(kind: FaceKind, n: int) -> tuple:
    key = (kind, n)
    cached = _GRID_LOCAL_CACHE.get(key)
    if cached is not None:
        return cached
    if kind == FaceKind.VERTEX:
        pts = ((0, 0),)
    elif kind == FaceKind.EDGE_H:
        pts = tuple((k, 0) for k in range(n + 1))
    elif kind == FaceKind.EDGE_V:
        pts = tuple((0, k) for k in range(n + 1))
    elif kind == FaceKind.EDGE_D:
        pts = tuple((n - k, k) for k in range(n + 1))
    elif kind == FaceKind.TRI_LOWER:
        pts = tuple(
            (a, b) for a in range(n + 1) for b in range(n + 1) if a + b <= n
        )
    else:
        pts = tuple(
            (a, b)
            for a in range(n + 1)
            for b in range(n + 1)
            if a + b >= n
        )
    _GRID_LOCAL_CACHE[key] = pts
    return pts


def grid_points_in_face(face: Face, n: int, q: int) -> list[GridPoint]:
    """All 1/(n*q) lattice points of the closed face, lexicographically."""
    size = n * q
    seen = {
        ((n * face.i + a) % size, (n * face.j + b) % size)
        for a, b in _grid_local(face.kind, n)
    }
    return [GridPoint(i, j, n, q) for i, j in sorted(seen)]


def subfaces(face: Face, q: int) -> tuple[Face, ...]:
    """All faces contained in the closed face, itself included."""
    i, j = face.i, face.j
    if face.kind == FaceKind.VERTEX:
        out = [face]
    elif face.kind == FaceKind.EDGE_H:
        out = [face, Face(FaceKind.VERTEX, i, j), make_face(FaceKind.VERTEX, i + 1, j, q)]
    elif face.kind == FaceKind.EDGE_V:
        out = [face, Face(FaceKind.VERTEX, i, j), make_face(FaceKind.VERTEX, i, j + 1, q)]
    elif face.kind == FaceKind.EDGE_D:
        out = [
            face,
            make_face(FaceKind.VERTEX, i + 1, j, q),
            make_face(FaceKind.VERTEX, i, j + 1, q),
        ]
    elif face.kind == FaceKind.TRI_LOWER:
        out = [
            face,
            Face(FaceKind.EDGE_H, i, j),
            Face(FaceKind.EDGE_V, i, j),
            Face(FaceKind.EDGE_D, i, j),
            Face(FaceKind.VERTEX, i, j),
            make_face(FaceKind.VERTEX, i + 1, j, q),
            make_face(FaceKind.VERTEX, i, j + 1, q),
        ]
    else:
        out = [
            face,
            make_face(FaceKind.EDGE_H, i, j + 1, q),
            make_face(FaceKind.EDGE_V, i + 1, j, q),
            Face(FaceKind.EDGE_D, i, j),
            make_face(FaceKind.VERTEX, i + 1, j, q),
            make_face(FaceKind.VERTEX, i, j + 1, q),
            make_face(FaceKind.VERTEX, i + 1, j + 1, q),
        ]
    return tuple(sorted(set(out)))


def superfaces(face: Face, q: int) -> tuple[Face, ...]:
    """All faces containing the closed face, itself included."""
    i, j = face.i, face.j
    if face.kind == FaceKind.VERTEX:
        out = [
            face,
            Face(FaceKind.EDGE_H, i, j),
            make_face(FaceKind.EDGE_H, i - 1, j, q),
            Face(FaceKind.EDGE_V, i, j),
            make_face(FaceKind.EDGE_V, i, j - 1, q),
            make_face(FaceKind.EDGE_D, i - 1, j, q),
            make_face(FaceKind.EDGE_D, i, j - 1, q),
            Face(FaceKind.TRI_LOWER, i, j),
            make_face(FaceKind.TRI_LOWER, i - 1, j, q),
            make_face(FaceKind.TRI_LOWER, i, j - 1, q),
            make_face(FaceKind.TRI_UPPER, i - 1, j, q),
            make_face(FaceKind.TRI_UPPER, i, j - 1, q),
            make_face(FaceKind.TRI_UPPER, i - 1, j - 1, q),
        ]
    elif face.kind == FaceKind.EDGE_H:
        out = [face, Face(FaceKind.TRI_LOWER, i, j), make_face(FaceKind.TRI_UPPER, i, j - 1, q)]
    elif face.kind == FaceKind.EDGE_V:
        out = [face, Face(FaceKind.TRI_LOWER, i, j), make_face(FaceKind.TRI_UPPER, i - 1, j, q)]
    elif face.kind == FaceKind.EDGE_D:
        out = [face, Face(FaceKind.TRI_LOWER, i, j), Face(FaceKind.TRI_UPPER, i, j)]
    else:
        out = [face]
    return tuple(sorted(set(out)))


_TRI_BY_VERTS: dict[frozenset, tuple[FaceKind, int, int]] = {}
for _kind in TRI_KINDS:
    _vs = frozenset(_LOCAL_VERTS[_kind])
    _TRI_BY_VERTS[_vs] = (_kind, 0, 0)


def _face_from_cover_verts(verts: frozenset) -> tuple[FaceKind, int, int] | None:
    """Identify the cover face spanned by a vertex set, or None."""
    if len(verts) == 1:
        ((x, y),) = verts
        return (FaceKind.VERTEX, x, y)
    if len(verts) == 2:
        (a, b) = sorted(verts)
        dx, dy = b[0] - a[0], b[1] - a[1]
        if (dx, dy) == (1, 0):
            return (FaceKind.EDGE_H, a[0], a[1])
        if (dx, dy) == (0, 1):
            return (FaceKind.EDGE_V, a[0], a[1])
        if (dx, dy) == (1, -1):  # sorted order puts (i, j+1) first
            return (FaceKind.EDGE_D, a[0], a[1] - 1)
        return None
    if len(verts) == 3:
        ox = min(v[0] for v in verts)
        oy = min(v[1] for v in verts)
        local = frozenset((v[0] - ox, v[1] - oy) for v in verts)
        hit = _TRI_BY_VERTS.get(local)
        if hit is None:
            return None
        kind, _, _ = hit
        return (kind, ox, oy)
    return None


def face_intersection(f1: Face, f2: Face, q: int) -> tuple[Face, ...]:
    """Common faces of two closed faces on the torus.

    On the universal cover two faces of a triangulation meet in the face
    spanned by their shared vertices; on the torus the intersection can be
    a union of several such faces once q <= 2, hence the tuple result.
    """
    v1 = set(scaled_vertices(f1))
    out = set()
    for z1, z2 in itertools.product((-q, 0, q), repeat=2):
        v2 = {(x + z1, y + z2) for x, y in scaled_vertices(f2)}
        shared = frozenset(v1 & v2)
        if not shared:
            continue
        hit = _face_from_cover_verts(shared)
        if hit is None:
            continue
        kind, x, y = hit
        out.add(Face(kind, x % q, y % q))
    return tuple(sorted(out))
