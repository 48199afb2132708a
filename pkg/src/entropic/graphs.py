"""Signed multigraphs and the Tutte-style magma invariant.

Edges keep their original index through deletion and contraction; the
invariant always processes the remaining edge that comes first in the
chosen order.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .links import fold_leaves
from .magma import (
    EventualSequence,
    FiniteMagma,
    MagmaError,
    Partition,
    congruence_closure,
    quotient_magma,
)

EXACT_EDGE_LIMIT = 6


@dataclass(frozen=True)
class Edge:
    index: int
    u: int
    v: int
    sign: int

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class SignedGraph:
    vertices: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.vertices < 0:
            raise MagmaError("vertex count must be >= 0")
        edges = tuple(self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for e in edges:
            if not (1 <= e.u <= self.vertices and 1 <= e.v <= self.vertices):
                raise MagmaError(f"edge {e.index} has an endpoint outside 1..{self.vertices}")
            if e.sign not in (1, -1):
                raise MagmaError(f"edge {e.index} has sign {e.sign}, expected +1 or -1")
            if e.index in seen:
                raise MagmaError(f"duplicate edge index {e.index}")
            seen.add(e.index)

    @classmethod
    def build(cls, vertices: int, edges: Sequence[tuple[int, int, int]]) -> "SignedGraph":
        """Edges given as ``(u, v, sign)``, indexed 1, 2, ... in list order."""
        return cls(vertices, tuple(Edge(i, u, v, s) for i, (u, v, s) in enumerate(edges, start=1)))

    def edge(self, index: int) -> Edge:
        for e in self.edges:
            if e.index == index:
                return e
        raise MagmaError(f"no edge with index {index}")

    @property
    def edge_indices(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.edges)

    def relabel_vertices(self, perm: Sequence[int]) -> "SignedGraph":
        """``perm[v - 1]`` is the new name of vertex ``v``."""
        return SignedGraph(
            self.vertices, tuple(Edge(e.index, perm[e.u - 1], perm[e.v - 1], e.sign) for e in self.edges)
        )


REDUCE_MODES = ("delete", "contract", "contract_loop_isolated")


def reduce(g: SignedGraph, index: int, mode: str) -> SignedGraph:
    e = g.edge(index)
    rest = tuple(f for f in g.edges if f.index != index)
    if mode == "delete":
        return SignedGraph(g.vertices, rest)
    if mode == "contract":
        if e.is_loop:
            raise MagmaError(f"edge {index} is a loop; use contract_loop_isolated")
        keep, gone = min(e.u, e.v), max(e.u, e.v)

        def rename(x: int) -> int:
            if x == gone:
                x = keep
            return x - 1 if x > gone else x

        return SignedGraph(g.vertices - 1, tuple(Edge(f.index, rename(f.u), rename(f.v), f.sign) for f in rest))
    if mode == "contract_loop_isolated":
        if not e.is_loop:
            raise MagmaError(f"edge {index} is not a loop")
        return SignedGraph(g.vertices + 1, rest)
    raise MagmaError(f"unknown reduce mode {mode!r}")


def _children(g: SignedGraph, e: Edge) -> tuple[SignedGraph, SignedGraph]:
    """The (left, right) operands: contraction side first for +, deletion first for -."""
    shrink = reduce(g, e.index, "contract_loop_isolated" if e.is_loop else "contract")
    drop = reduce(g, e.index, "delete")
    return (shrink, drop) if e.sign == 1 else (drop, shrink)


def _check_order(g: SignedGraph, order) -> tuple[int, ...]:
    if order is None:
        return g.edge_indices
    order = tuple(order)
    if sorted(order) != sorted(g.edge_indices):
        raise MagmaError(f"order {order} is not a permutation of the edge indices")
    return order


def tutte_leaves(g: SignedGraph, order: Sequence[int] | None = None) -> tuple[int, ...]:
    """Vertex counts of the fully reduced graphs, left to right in the computation tree."""
    order = _check_order(g, order)
    out: list[int] = []

    def walk(h: SignedGraph, depth: int) -> None:
        if depth == len(order):
            out.append(h.vertices)
            return
        e = h.edge(order[depth])
        for child in _children(h, e):
            walk(child, depth + 1)

    walk(g, 0)
    return tuple(out)


def tutte_value(
    magma: FiniteMagma, seq: EventualSequence, g: SignedGraph, order: Sequence[int] | None = None
) -> int:
    if g.vertices == 0:
        raise MagmaError("empty graph")
    return fold_leaves(magma, seq, tutte_leaves(g, order))


@dataclass(frozen=True)
class OrderingValues:
    values: frozenset[int]
    exact: bool
    orders_checked: int

    def __str__(self) -> str:
        kind = "exact" if self.exact else "sampled"
        return f"{{{', '.join(map(str, sorted(self.values)))}}} ({kind}, {self.orders_checked} orders)"


def all_ordering_values(
    magma: FiniteMagma,
    seq: EventualSequence,
    g: SignedGraph,
    limit: int = 200,
    rng: random.Random | None = None,
) -> OrderingValues:
    """Values of the invariant over every edge order (sampled above six edges)."""
    edges = list(g.edge_indices)
    if len(edges) <= EXACT_EDGE_LIMIT:
        orders = itertools.permutations(edges)
        count = math.factorial(len(edges))
        exact = True
    else:
        rng = rng or random.Random(0)
        orders = (rng.sample(edges, len(edges)) for _ in range(limit))
        count = limit
        exact = False
    values = frozenset(tutte_value(magma, seq, g, order) for order in orders)
    return OrderingValues(values, exact, count)


@dataclass(frozen=True)
class QuotientInvariant:
    partition: Partition
    quotient: FiniteMagma
    value_class: int
    values: OrderingValues


def quotient_invariant(
    magma: FiniteMagma,
    seq: EventualSequence,
    g: SignedGraph,
    force: bool = False,
    limit: int = 200,
    rng: random.Random | None = None,
) -> QuotientInvariant:
    """Collapse the congruence generated by all order-dependent values."""
    found = all_ordering_values(magma, seq, g, limit, rng)
    if not found.exact and not force:
        raise MagmaError(f"ordering values were sampled ({len(g.edges)} edges); pass force to accept")
    values = sorted(found.values)
    partition = congruence_closure(magma, [(values[0], v) for v in values[1:]])
    classes = partition.classes()
    value_class = next(i for i, cls in enumerate(classes, start=1) if values[0] in cls)
    return QuotientInvariant(partition, quotient_magma(magma, partition), value_class, found)


# -- fixtures --------------------------------------------------------------------

GRAPH_KINDS = ("line", "cycle", "cycle_doubled", "path", "path_pp", "path_nn", "double_pos", "double_neg")


def make_graph_fixture(kind: str, n: int = 1, signs: Sequence[int] | None = None) -> SignedGraph:
    """Named fixture graphs.

    ``line``/``cycle``/``cycle_doubled`` take their size ``n``. The small
    relation probes (``path``, ``path_pp``, ``path_nn``, ``double_pos``,
    ``double_neg``) get ``n - 1`` extra isolated vertices so that their leaves
    read ``a_n, a_{n+1}, ...``.
    """
    if kind not in GRAPH_KINDS:
        raise MagmaError(f"unknown graph fixture {kind!r}")
    if n < 1 and not (kind == "line" and n == 0):
        raise MagmaError(f"fixture {kind} needs n >= 1")
    if kind == "line":
        return SignedGraph.build(n + 1, [(i, i + 1, 1) for i in range(1, n + 1)])
    if kind == "cycle":
        if n == 1:
            return SignedGraph.build(1, [(1, 1, 1)])
        return SignedGraph.build(n, [(i, i % n + 1, 1) for i in range(1, n + 1)])
    if kind == "cycle_doubled":
        if n < 2:
            raise MagmaError("cycle_doubled needs n >= 2")
        # the doubled edge comes first so the first contraction leaves a loop
        edges = [(1, 2, 1)] + [(i, i % n + 1, 1) for i in range(1, n + 1)]
        return SignedGraph.build(n, edges)
    extra = n - 1
    if kind in ("path", "path_pp", "path_nn"):
        if kind == "path_pp":
            signs = (1, 1, -1)
        elif kind == "path_nn":
            signs = (-1, -1, 1)
        elif signs is None:
            signs = (1, -1)
        k = len(signs)
        return SignedGraph.build(k + 1 + extra, [(i, i + 1, s) for i, s in enumerate(signs, start=1)])
    sign = 1 if kind == "double_pos" else -1
    return SignedGraph.build(3 + extra, [(1, 2, sign), (1, 2, sign), (2, 3, sign)])


def random_signed_graph(rng: random.Random, vertices: int, edges: int) -> SignedGraph:
    return SignedGraph.build(
        vertices,
        [(rng.randint(1, vertices), rng.randint(1, vertices), rng.choice((1, -1))) for _ in range(edges)],
    )
