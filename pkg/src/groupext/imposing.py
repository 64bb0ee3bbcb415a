"""Propagation of forced affine structure across the triangles.

Additive triples force structure on any midpoint decomposition of the
function: an all-triangle additive triple forces affineness on its three
triangles, and a triple pairing two triangles through a diagonal edge
forces constancy of the diagonal directional derivative.  Triangles tied
to each other through a vertex or a diagonal edge inherit these
constraints along graph components; a diagonally-forced component is
upgraded to fully forced when one of its triangles shares a horizontal or
vertical edge with a fully forced triangle.

When every triangle ends up fully forced, any midpoint decomposition is
again piecewise linear on the coarse grid and extremality reduces to the
linear system.  Otherwise a witness triangle picks which of the two
explicit perturbations applies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .additivity import AdditiveSet
from .geometry import Face, FaceKind, make_face, triangles
from .piecewise import PLFunction


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class ImposingGraph:
    """Triangles as nodes; edges from vertex-linked and diagonal-linked triples."""

    q: int
    nodes: tuple[Face, ...]
    edges_vertex: frozenset[frozenset]
    edges_diag: frozenset[frozenset]
    components: tuple[frozenset, ...]

    def component_of(self, tri: Face) -> frozenset:
        for comp in self.components:
            if tri in comp:
                return comp
        raise KeyError(f"{tri} is not a triangle node of the graph")


@dataclass(frozen=True)
class Classification:
    """Outcome of the one-shot affine-forcing analysis.

    affine_seeds / diag_seeds are the triangles directly forced by triples;
    affine_reach / diag_reach close them under graph components; promoted
    holds the diagonally forced components upgraded through a shared axis
    edge.  affine_closed = affine_reach + promoted decides the verdict:
    the function is affine imposing exactly when it covers every triangle.
    """

    q: int
    diag_seeds: frozenset
    affine_seeds: frozenset
    diag_reach: frozenset
    affine_reach: frozenset
    promoted: frozenset
    affine_closed: frozenset
    diag_rest: frozenset
    affine_imposing: bool
    witness: Face | None
    witness_outside_both: bool

    @property
    def witness_in_diag_rest(self) -> bool:
        return self.witness is not None and not self.witness_outside_both


def _triple_pattern(t) -> tuple[Face, Face, Face] | None:
    """Split a triple into (tri, tri, link) when exactly one face is a link."""
    tris = [f for f in t.faces() if f.is_triangle()]
    others = [f for f in t.faces() if not f.is_triangle()]
    if len(tris) == 2 and len(others) == 1:
        return tris[0], tris[1], others[0]
    return None


def build_graph(aset: AdditiveSet) -> ImposingGraph:
    q = aset.q
    nodes = tuple(triangles(q))
    edges_vertex = set()
    edges_diag = set()
    for t in aset.triples:
        pat = _triple_pattern(t)
        if pat is None:
            continue
        a, b, link = pat
        if a == b:  # self-loops carry no connectivity
            continue
        if link.kind == FaceKind.VERTEX:
            edges_vertex.add(frozenset((a, b)))
        elif link.kind == FaceKind.EDGE_D:
            edges_diag.add(frozenset((a, b)))

    uf = _UnionFind(nodes)
    for e in edges_vertex | edges_diag:
        a, b = tuple(e)
        uf.union(a, b)
    comp_map: dict[Face, list[Face]] = {}
    for node in nodes:
        comp_map.setdefault(uf.find(node), []).append(node)
    components = tuple(
        frozenset(members) for _, members in sorted(comp_map.items())
    )
    return ImposingGraph(
        q, nodes, frozenset(edges_vertex), frozenset(edges_diag), components
    )


def _axis_neighbours(tri: Face, q: int) -> tuple[Face, Face]:
    """The two triangles sharing a horizontal or vertical edge with tri."""
    i, j = tri.i, tri.j
    if tri.kind == FaceKind.TRI_LOWER:
        return (
            make_face(FaceKind.TRI_UPPER, i, j - 1, q),
            make_face(FaceKind.TRI_UPPER, i - 1, j, q),
        )
    return (
        make_face(FaceKind.TRI_LOWER, i, j + 1, q),
        make_face(FaceKind.TRI_LOWER, i + 1, j, q),
    )


def classify(
    pl: PLFunction, graph: ImposingGraph, aset: AdditiveSet
) -> Classification:
    """One-shot classification; no fixpoint iteration of the promotion step."""
    q = aset.q
    diag_seeds = set()
    affine_seeds = set()
    for t in aset.triples:
        fs = t.faces()
        if all(f.is_triangle() for f in fs):
            affine_seeds.update(fs)
            continue
        pat = _triple_pattern(t)
        if pat is not None and pat[2].kind == FaceKind.EDGE_D:
            diag_seeds.update((pat[0], pat[1]))

    def reach(seeds: set) -> frozenset:
        out = set()
        for comp in graph.components:
            if comp & seeds:
                out |= comp
        return frozenset(out)

    diag_reach = reach(diag_seeds)
    affine_reach = reach(affine_seeds)

    promoted = set()
    for comp in graph.components:
        if not comp & diag_reach:
            continue
        for tri in comp:
            if any(nb in affine_reach for nb in _axis_neighbours(tri, q)):
                promoted |= comp
                break

    affine_closed = affine_reach | promoted
    # Subtracting all of affine_closed (not just promoted) keeps the two
    # result classes disjoint; a triangle reached both ways is fully forced,
    # and the wave construction is only sound on components that are not.
    diag_rest = diag_reach - affine_closed
    all_tris = set(graph.nodes)
    affine_imposing = affine_closed == all_tris

    witness = None
    outside_both = False
    if not affine_imposing:
        outside = sorted(all_tris - (affine_closed | diag_rest))
        if outside:
            witness = outside[0]
            outside_both = True
        else:
            witness = sorted(diag_rest)[0]
    return Classification(
        q=q,
        diag_seeds=frozenset(diag_seeds),
        affine_seeds=frozenset(affine_seeds),
        diag_reach=diag_reach,
        affine_reach=frozenset(affine_reach),
        promoted=frozenset(promoted),
        affine_closed=frozenset(affine_closed),
        diag_rest=frozenset(diag_rest),
        affine_imposing=affine_imposing,
        witness=witness,
        witness_outside_both=outside_both,
    )
