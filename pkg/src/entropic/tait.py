"""The medial (Tait) construction from signed plane graphs to link diagrams.

A plane graph is a signed graph plus a rotation system: for each vertex the
counter-clockwise cyclic order of its half-edges. Half-edge ``(i, 0)`` sits
at the first endpoint of edge ``i``, ``(i, 1)`` at the second.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .graphs import SignedGraph, tutte_leaves
from .links import LinkDiagram, fold_leaves, resolve_leaves
from .magma import CheckResult, EventualSequence, FiniteMagma, MagmaError

HalfEdge = tuple[int, int]


@dataclass(frozen=True)
class PlaneGraph:
    graph: SignedGraph
    rotation: tuple[tuple[HalfEdge, ...], ...]

    def __post_init__(self):
        rotation = tuple(tuple((int(i), int(end)) for i, end in r) for r in self.rotation)
        object.__setattr__(self, "rotation", rotation)
        g = self.graph
        if len(rotation) != g.vertices:
            raise MagmaError(f"rotation system lists {len(rotation)} vertices, graph has {g.vertices}")
        expected = {}
        for e in g.edges:
            expected[(e.index, 0)] = e.u
            expected[(e.index, 1)] = e.v
        seen = set()
        for v, r in enumerate(rotation, start=1):
            for h in r:
                if h not in expected:
                    raise MagmaError(f"unknown half-edge {format_half_edge(h)} at vertex {v}")
                if h in seen:
                    raise MagmaError(f"half-edge {format_half_edge(h)} listed twice")
                if expected[h] != v:
                    raise MagmaError(f"half-edge {format_half_edge(h)} belongs to vertex {expected[h]}, not {v}")
                seen.add(h)
        missing = sorted(set(expected) - seen)
        if missing:
            raise MagmaError(f"half-edge {format_half_edge(missing[0])} missing from the rotation system")

    def _position(self) -> dict[HalfEdge, tuple[int, int]]:
        return {h: (v, k) for v, r in enumerate(self.rotation) for k, h in enumerate(r)}

    def next_half_edge(self, h: HalfEdge) -> HalfEdge:
        v, k = self._position()[h]
        r = self.rotation[v]
        return r[(k + 1) % len(r)]

    def faces(self) -> list[list[HalfEdge]]:
        """Face boundaries as orbits of ``h -> twin(next(h))`` (corners named by ``h``)."""
        pos = self._position()

        def step(h: HalfEdge) -> HalfEdge:
            v, k = pos[h]
            r = self.rotation[v]
            g = r[(k + 1) % len(r)]
            return (g[0], 1 - g[1])

        seen: set[HalfEdge] = set()
        out = []
        for r in self.rotation:
            for h in r:
                if h in seen:
                    continue
                orbit = []
                while h not in seen:
                    seen.add(h)
                    orbit.append(h)
                    h = step(h)
                out.append(orbit)
        return out

    def components(self) -> list[set[int]]:
        parent = list(range(self.graph.vertices + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.graph.edges:
            parent[find(e.u)] = find(e.v)
        groups: dict[int, set[int]] = {}
        for v in range(1, self.graph.vertices + 1):
            groups.setdefault(find(v), set()).add(v)
        return list(groups.values())

    def euler_ok(self) -> bool:
        """Each component with edges satisfies V - E + F = 2 (faces from the rotation system)."""
        faces = self.faces()
        for comp in self.components():
            edges = [e for e in self.graph.edges if e.u in comp]
            if not edges:
                continue
            ids = {e.index for e in edges}
            f = sum(1 for face in faces if face[0][0] in ids)
            if len(comp) - len(edges) + f != 2:
                return False
        return True


def format_half_edge(h: HalfEdge) -> str:
    return f"{h[0]}{'ab'[h[1]]}"


def medial_link(pg: PlaneGraph) -> LinkDiagram:
    """One crossing per edge, in edge order; isolated vertices become free circles.

    Corner ``h`` (the sector after half-edge ``h`` in its rotation) is an arc.
    For an edge drawn left to right the four slots are NW = corner(a),
    SW = corner(prev a), SE = corner(b), NE = corner(prev b). A positive edge
    lists them from NE so its 0-smoothing opens the channel along the edge
    (contraction); a negative edge starts from NW so 0 is deletion.
    """
    label: dict[HalfEdge, int] = {}
    prev: dict[HalfEdge, HalfEdge] = {}
    for r in pg.rotation:
        for k, h in enumerate(r):
            label[h] = len(label) + 1
            prev[h] = r[k - 1]
    crossings = []
    for e in pg.graph.edges:
        a, b = (e.index, 0), (e.index, 1)
        nw, sw, se, ne = label[a], label[prev[a]], label[b], label[prev[b]]
        crossings.append((ne, nw, sw, se) if e.sign == 1 else (nw, sw, se, ne))
    isolated = sum(1 for r in pg.rotation if not r)
    return LinkDiagram(tuple(crossings), isolated)


def _edge_order_to_crossings(pg: PlaneGraph, order) -> tuple[int, ...] | None:
    if order is None:
        return None
    where = {e.index: k for k, e in enumerate(pg.graph.edges)}
    return tuple(where[i] for i in order)


def cross_check(
    magma: FiniteMagma, seq: EventualSequence, pg: PlaneGraph, order: Sequence[int] | None = None
) -> CheckResult:
    """Compare the graph invariant with the bracket of the medial diagram, state by state."""
    diagram = medial_link(pg)
    graph_leaves = tutte_leaves(pg.graph, order)
    link_leaves = resolve_leaves(diagram, _edge_order_to_crossings(pg, order))
    for k, (x, y) in enumerate(zip(graph_leaves, link_leaves)):
        if x != y:
            return CheckResult(False, (k,), f"state {k}: residual graph has {x} vertices, diagram has {y} circles")
    tv = fold_leaves(magma, seq, graph_leaves)
    bv = fold_leaves(magma, seq, link_leaves)
    if tv != bv:
        return CheckResult(False, None, f"graph value {tv} != bracket value {bv}")
    return CheckResult(True, None, f"value {tv}")


# -- construction helpers ----------------------------------------------------------


def plane_graph(vertices: int, edges: Sequence[tuple[int, int, int]], rotation=None) -> PlaneGraph:
    """Build from ``(u, v, sign)`` edges; the default rotation lists half-edges in edge order.

    The default is planar for forests, cycles drawn as polygons and the
    parallel-edge fixtures used here; callers pass an explicit rotation otherwise.
    """
    g = SignedGraph.build(vertices, edges)
    if rotation is None:
        rot: list[list[HalfEdge]] = [[] for _ in range(vertices)]
        for e in g.edges:
            rot[e.u - 1].append((e.index, 0))
            rot[e.v - 1].append((e.index, 1))
        rotation = rot
    return PlaneGraph(g, tuple(tuple(r) for r in rotation))


def cycle_plane_graph(n: int, sign: int = 1) -> PlaneGraph:
    """``C_n`` drawn as a polygon (a loop for n = 1, a digon for n = 2)."""
    if n == 1:
        return plane_graph(1, [(1, 1, sign)])
    edges = [(i, i % n + 1, sign) for i in range(1, n + 1)]
    # vertex i meets edge i-1 (arriving) and edge i (leaving); keep the polygon's inside consistent
    rotation = []
    for v in range(1, n + 1):
        leaving = (v, 0)
        arriving = ((v - 2) % n + 1, 1)
        rotation.append((leaving, arriving))
    return PlaneGraph(SignedGraph.build(n, edges), tuple(rotation))


def doubled_cycle_plane_graph(n: int, sign: int = 1) -> PlaneGraph:
    """``C'_n``: the polygon with its first edge doubled (edge 1 and edge 2 parallel)."""
    if n < 2:
        raise MagmaError("doubled cycle needs n >= 2")
    base = cycle_plane_graph(n, sign)
    edges = [(1, 2, sign)] + [(e.u, e.v, sign) for e in base.graph.edges]
    g = SignedGraph.build(n, edges)
    shift = {(i, end): (i + 1, end) for (i, end) in itertools.product(range(1, n + 1), (0, 1))}
    rotation = [list(shift[h] for h in r) for r in base.rotation]
    # the new edge runs beside old edge 1 (now 2): insert it next to each end
    r1 = rotation[0]
    r1.insert(r1.index((2, 0)), (1, 0))
    r2 = rotation[1]
    r2.insert(r2.index((2, 1)) + 1, (1, 1))
    return PlaneGraph(g, tuple(tuple(r) for r in rotation))


def line_plane_graph(n: int, sign: int = 1) -> PlaneGraph:
    return plane_graph(n + 1, [(i, i + 1, sign) for i in range(1, n + 1)])


def random_plane_graph(rng: random.Random, edges: int, loops: bool = True) -> PlaneGraph:
    """Grow a plane graph: pendant edges, chords across a face, or a fresh component."""
    vertices = 1
    rot: list[list[HalfEdge]] = [[]]
    ends: list[tuple[int, int, int]] = []
    for _ in range(edges):
        sign = rng.choice((1, -1))
        faces = PlaneGraph(SignedGraph.build(vertices, ends), tuple(tuple(r) for r in rot)).faces()
        move = rng.random()
        if move < 0.1:
            # a fresh component, possibly leaving an isolated vertex behind
            vertices += 1
            rot.append([])
            if rng.random() < 0.5:
                continue
            u = vertices
        elif move < 0.5 or not faces:
            u = rng.randint(1, vertices)
        else:
            face = rng.choice(faces)
            c1, c2 = rng.choice(face), rng.choice(face)
            if c1 == c2 and not loops:
                c2 = face[(face.index(c1) + 1) % len(face)]
            _add_chord(rot, ends, c1, c2, sign, rng)
            continue
        _add_pendant(rot, ends, u, vertices + 1, sign, rng)
        vertices += 1
        rot.append([(len(ends), 1)])
    return PlaneGraph(SignedGraph.build(vertices, ends), tuple(tuple(r) for r in rot))


def _vertex_of(rot, h: HalfEdge) -> tuple[int, int]:
    for v, r in enumerate(rot):
        if h in r:
            return v, r.index(h)
    raise MagmaError(f"half-edge {h} not found")


def _add_pendant(rot, ends, u: int, new_vertex: int, sign: int, rng: random.Random | None = None) -> None:
    index = len(ends) + 1
    r = rot[u - 1]
    k = rng.randint(0, len(r)) if rng and r else len(r)
    r.insert(k, (index, 0))
    ends.append((u, new_vertex, sign))


def _add_chord(rot, ends, c1: HalfEdge, c2: HalfEdge, sign: int, rng: random.Random) -> None:
    """Join the corners after ``c1`` and after ``c2``; both lie on one face."""
    index = len(ends) + 1
    v1, k1 = _vertex_of(rot, c1)
    v2, k2 = _vertex_of(rot, c2)
    if c1 == c2:
        first, second = ((index, 0), (index, 1)) if rng.random() < 0.5 else ((index, 1), (index, 0))
        rot[v1].insert(k1 + 1, second)
        rot[v1].insert(k1 + 1, first)
    else:
        rot[v1].insert(k1 + 1, (index, 0))
        k2 = rot[v2].index(c2)
        rot[v2].insert(k2 + 1, (index, 1))
    ends.append((v1 + 1, v2 + 1, sign))


# -- Y-Delta fixtures for the third Reidemeister move -----------------------------

# Resolving the crossing of edge 3 (triangle) / edge 2 (star) leaves equal paths on
# one side and an opposite-sign digon versus an opposite-sign series pair on the other.
TRIANGLE_SIGNS = (1, -1, 1)
STAR_SIGNS = (1, -1, -1)
# the corner, at each outer vertex, facing away from the move
_TRIANGLE_OUTSIDE = {1: (3, 1), 2: (1, 1), 3: (2, 1)}
_STAR_OUTSIDE = {1: (1, 1), 2: (2, 1), 3: (3, 1)}


def triangle_star_pair() -> tuple[PlaneGraph, PlaneGraph]:
    """A triangle on vertices 1, 2, 3 and the star with centre 4 on the same three vertices."""
    tri = plane_graph(
        3,
        [(1, 2, TRIANGLE_SIGNS[0]), (2, 3, TRIANGLE_SIGNS[1]), (3, 1, TRIANGLE_SIGNS[2])],
        [[(1, 0), (3, 1)], [(2, 0), (1, 1)], [(3, 0), (2, 1)]],
    )
    star = plane_graph(
        4,
        [(4, 1, STAR_SIGNS[0]), (4, 2, STAR_SIGNS[1]), (4, 3, STAR_SIGNS[2])],
        [[(1, 1)], [(2, 1)], [(3, 1)], [(1, 0), (2, 0), (3, 0)]],
    )
    return tri, star


def _grow_outside(pg: PlaneGraph, outside: dict[int, HalfEdge], ops) -> PlaneGraph:
    edges = [(e.u, e.v, e.sign) for e in pg.graph.edges]
    rot = [list(r) for r in pg.rotation]
    vertices = pg.graph.vertices
    for op in ops:
        index = len(edges) + 1
        if op[0] == "pendant":
            _, u, sign = op
            vertices += 1
            rot[u - 1].insert(rot[u - 1].index(outside[u]) + 1, (index, 0))
            rot.append([(index, 1)])
            edges.append((u, vertices, sign))
        else:
            _, u, v, sign = op
            rot[u - 1].insert(rot[u - 1].index(outside[u]) + 1, (index, 0))
            rot[v - 1].insert(rot[v - 1].index(outside[v]) + 1, (index, 1))
            edges.append((u, v, sign))
    return PlaneGraph(SignedGraph.build(vertices, edges), tuple(tuple(r) for r in rot))


def r3_context_pair(rng: random.Random, extra_edges: int = 3, attempts: int = 100) -> tuple[PlaneGraph, PlaneGraph]:
    """The triangle/star pair with the same random edges added outside the move.

    Extra edges are pendants or chords between the outer corners; candidates
    that fail the Euler check are redrawn.
    """
    tri, star = triangle_star_pair()
    for _ in range(attempts):
        ops = []
        for _ in range(extra_edges):
            sign = rng.choice((1, -1))
            if rng.random() < 0.4:
                ops.append(("pendant", rng.randint(1, 3), sign))
            else:
                ops.append(("chord", rng.randint(1, 3), rng.randint(1, 3), sign))
        a = _grow_outside(tri, _TRIANGLE_OUTSIDE, ops)
        b = _grow_outside(star, _STAR_OUTSIDE, ops)
        if a.euler_ok() and b.euler_ok():
            return a, b
    raise MagmaError("could not draw a planar context")


def r3_pair() -> tuple[LinkDiagram, LinkDiagram]:
    tri, star = triangle_star_pair()
    return medial_link(tri), medial_link(star)
