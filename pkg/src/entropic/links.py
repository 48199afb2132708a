"""Unoriented framed link diagrams and the bracket magma invariant.

A crossing is four arc labels in cyclic slot order ``(a, b, c, d)``. The
0-smoothing joins ``a-b`` and ``c-d``; the infinity-smoothing joins ``b-c``
and ``d-a``. Every arc label occurs on exactly two slots of the diagram.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .magma import CheckResult, EventualSequence, FiniteMagma, MagmaError

Crossing = tuple[int, int, int, int]

ZERO, INF = 0, 1
MOVE_KINDS = ("R2-denominator", "R2-numerator", "R3", "fourmove", "fourmove-numerator")


def _which(which) -> int:
    if which in (0, "0"):
        return ZERO
    if which in (1, "inf", "∞", INF):
        return INF
    raise MagmaError(f"unknown smoothing {which!r}")


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...] = ()
    free_circles: int = 0

    def __post_init__(self):
        crossings = tuple(tuple(int(v) for v in c) for c in self.crossings)
        object.__setattr__(self, "crossings", crossings)
        if self.free_circles < 0:
            raise MagmaError("free_circles must be >= 0")
        for c in crossings:
            if len(c) != 4:
                raise MagmaError(f"crossing {c} must have four slots")
        counts = Counter(v for c in crossings for v in c)
        bad = sorted(label for label, k in counts.items() if k != 2)
        if bad:
            raise MagmaError(f"arc label {bad[0]} appears {counts[bad[0]]} times, expected 2")

    @classmethod
    def trivial(cls, n: int) -> "LinkDiagram":
        """``T_n``: ``n`` disjoint circles."""
        return cls((), n)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def arcs(self) -> list[int]:
        """Arc labels in order of first appearance."""
        return list(dict.fromkeys(v for c in self.crossings for v in c))

    def relabeled(self, offset: int) -> "LinkDiagram":
        return LinkDiagram(tuple(tuple(v + offset for v in c) for c in self.crossings), self.free_circles)

    def mirror(self) -> "LinkDiagram":
        """Swap the two smoothings at every crossing."""
        return LinkDiagram(tuple((b, c, d, a) for a, b, c, d in self.crossings), self.free_circles)

    def __or__(self, other: "LinkDiagram") -> "LinkDiagram":
        """Disjoint union; labels of ``other`` are shifted past ours."""
        offset = max(self.arcs(), default=0)
        shifted = other.relabeled(offset - min(other.arcs(), default=1) + 1)
        return LinkDiagram(self.crossings + shifted.crossings, self.free_circles + other.free_circles)


def _pairs(crossing: Crossing, which: int) -> tuple[tuple[int, int], tuple[int, int]]:
    a, b, c, d = crossing
    return ((a, b), (c, d)) if which == ZERO else ((b, c), (d, a))


def smooth(d: LinkDiagram, index: int, which) -> LinkDiagram:
    """Remove one crossing, joining its slots by the chosen pairing."""
    if not 0 <= index < len(d.crossings):
        raise MagmaError(f"crossing index {index} out of range for {len(d.crossings)} crossings")
    rest = [list(c) for i, c in enumerate(d.crossings) if i != index]
    pending = [list(p) for p in _pairs(d.crossings[index], _which(which))]
    circles = d.free_circles
    for k, (x, y) in enumerate(pending):
        if x == y:
            circles += 1
            continue
        # merge arc y into arc x wherever y still occurs
        for c in rest:
            for j, v in enumerate(c):
                if v == y:
                    c[j] = x
        for p in pending[k + 1:]:
            for j, v in enumerate(p):
                if v == y:
                    p[j] = x
    return LinkDiagram(tuple(tuple(c) for c in rest), circles)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def state_circles(d: LinkDiagram, state: Sequence[int]) -> int:
    """Circle count after smoothing crossing ``i`` by ``state[i]`` (0 or 1)."""
    if len(state) != len(d.crossings):
        raise MagmaError("state length must equal the crossing count")
    uf = _UnionFind(d.arcs())
    for crossing, which in zip(d.crossings, state):
        for x, y in _pairs(crossing, which):
            uf.union(x, y)
    # every arc has two ends, each joined to one other end, so components are closed loops
    return d.free_circles + len({uf.find(x) for x in uf.parent})


def _check_order(order, count: int) -> tuple[int, ...]:
    if order is None:
        return tuple(range(count))
    order = tuple(order)
    if sorted(order) != list(range(count)):
        raise MagmaError(f"order {order} is not a permutation of 0..{count - 1}")
    return order


def resolve_leaves(d: LinkDiagram, order: Sequence[int] | None = None) -> tuple[int, ...]:
    """Circle counts at the leaves of the resolving tree, 0-branch first."""
    order = _check_order(order, len(d.crossings))
    leaves = []
    state = [0] * len(d.crossings)
    for bits in itertools.product((ZERO, INF), repeat=len(order)):
        for crossing, bit in zip(order, bits):
            state[crossing] = bit
        leaves.append(state_circles(d, state))
    return tuple(leaves)


def fold_leaves(magma: FiniteMagma, seq: EventualSequence, leaves: Sequence[int]) -> int:
    """Evaluate a full binary tree whose leaves are circle counts."""
    values = [seq(k) for k in leaves]
    while len(values) > 1:
        values = [magma.op(values[i], values[i + 1]) for i in range(0, len(values), 2)]
    return values[0]


def bracket(magma: FiniteMagma, seq: EventualSequence, d: LinkDiagram, order: Sequence[int] | None = None) -> int:
    if not d.crossings and d.free_circles == 0:
        raise MagmaError("empty diagram")
    return fold_leaves(magma, seq, resolve_leaves(d, order))


def add_circle(d: LinkDiagram) -> LinkDiagram:
    return LinkDiagram(d.crossings, d.free_circles + 1)


def add_kink(d: LinkDiagram, sign: int, arc: int | None = None) -> LinkDiagram:
    """Add one curl so that ``P(D+) = P(add_circle(D)) * P(D)`` and ``P(D-) = P(D) * P(add_circle(D))``.

    The curl goes on ``arc`` (default: the first arc); a diagram without
    crossings gets it on one of its free circles.
    """
    if sign not in (1, -1):
        raise MagmaError("kink sign must be +1 or -1")
    arcs = d.arcs()
    fresh = max(arcs, default=0) + 1
    loop = fresh
    if arc is None and not arcs:
        if d.free_circles == 0:
            raise MagmaError("no arc or circle to put a kink on")
        circle = fresh + 1
        new = (loop, loop, circle, circle) if sign == 1 else (circle, loop, loop, circle)
        return LinkDiagram(d.crossings + (new,), d.free_circles - 1)
    if arc is None:
        arc = arcs[0]
    if arc not in arcs:
        raise MagmaError(f"no arc labelled {arc}")
    tail = fresh + 1
    # the second occurrence of the arc now ends on the new crossing as `tail`
    crossings = [list(c) for c in d.crossings]
    seen = 0
    for c in crossings:
        for j, v in enumerate(c):
            if v == arc:
                seen += 1
                if seen == 2:
                    c[j] = tail
    new = (loop, loop, arc, tail) if sign == 1 else (arc, loop, loop, tail)
    return LinkDiagram(tuple(tuple(c) for c in crossings) + (new,), d.free_circles)


def order_invariance_check(
    magma: FiniteMagma,
    seq: EventualSequence,
    d: LinkDiagram,
    trials: int = 20,
    rng: random.Random | None = None,
) -> CheckResult:
    """Compare the bracket under the identity order against ``trials`` random orders."""
    if len(d.crossings) <= 1:
        return CheckResult(True)
    rng = rng or random.Random(0)
    base = bracket(magma, seq, d)
    order = list(range(len(d.crossings)))
    for _ in range(trials):
        rng.shuffle(order)
        value = bracket(magma, seq, d, order)
        if value != base:
            return CheckResult(False, tuple(order), f"order {order} gives {value}, identity order gives {base}")
    return CheckResult(True)


def all_orders_agree(magma: FiniteMagma, seq: EventualSequence, d: LinkDiagram) -> CheckResult:
    base = bracket(magma, seq, d)
    for order in itertools.permutations(range(len(d.crossings))):
        value = bracket(magma, seq, d, order)
        if value != base:
            return CheckResult(False, order, f"order {list(order)} gives {value}, identity order gives {base}")
    return CheckResult(True)


def random_diagram(rng: random.Random, crossings: int, free_circles: int = 0) -> LinkDiagram:
    """Random abstract diagram: the 4c slots are paired into arcs uniformly."""
    slots = list(range(4 * crossings))
    rng.shuffle(slots)
    labels = [0] * (4 * crossings)
    for k in range(0, len(slots), 2):
        labels[slots[k]] = labels[slots[k + 1]] = k // 2 + 1
    return LinkDiagram(tuple(tuple(labels[4 * i:4 * i + 4]) for i in range(crossings)), free_circles)


# -- fixtures --------------------------------------------------------------------

# R2 on a single circle, closed as a denominator: leaves (2, 1, 3, 2)
_R2_DENOMINATOR = LinkDiagram(((1, 2, 2, 3), (1, 3, 4, 4)))
# R2 between two parallel strands closed as a numerator: leaves (1, 2, 2, 1)
_R2_NUMERATOR = LinkDiagram(((1, 2, 3, 4), (1, 4, 3, 2)))
# clasp of two like crossings, denominator closure: leaves (1, 2, 2, 3)
_CLASP_DENOMINATOR = LinkDiagram(((1, 2, 2, 3), (4, 1, 3, 4)))
# same clasp, numerator closure: leaves (2, 1, 1, 2)
_CLASP_NUMERATOR = LinkDiagram(((1, 2, 3, 4), (4, 3, 2, 1)))

# two curls of opposite sign, one on each of two circles; leaves (3, 4, 2, 3)
EXAMPLE_TWO_KINKS = LinkDiagram(((1, 1, 2, 2), (3, 4, 4, 3)))
PLUS_KINK_UNKNOT = LinkDiagram(((1, 1, 2, 2),))
MINUS_KINK_UNKNOT = LinkDiagram(((1, 2, 2, 1),))


def _base_diagram(base, minimum: int) -> LinkDiagram:
    if isinstance(base, LinkDiagram):
        return base
    if not isinstance(base, int) or base < minimum:
        raise MagmaError(f"base must be an integer >= {minimum} or a LinkDiagram")
    return LinkDiagram.trivial(base - 1)


def make_move_fixture(kind: str, base=1, mirror: bool = False) -> tuple[LinkDiagram, LinkDiagram]:
    """Two diagrams related by the named move.

    An integer base ``n`` starts from ``T_n`` (``T_{n+1}`` for the numerator
    closure, whose move region holds two circles). A diagram base gets the
    move on extra split components. The 4-move pairs a clasp of two like
    crossings with its mirror. R3 is realised on a planar triangle-star pair.
    """
    if kind not in MOVE_KINDS:
        raise MagmaError(f"unsupported move kind {kind!r}")
    d = _base_diagram(base, 1)
    if kind == "R3":
        from .tait import r3_pair

        left, right = r3_pair()
        if mirror:
            left, right = left.mirror(), right.mirror()
        return d | left, d | right
    if kind == "R2-denominator":
        moved = _R2_DENOMINATOR.mirror() if mirror else _R2_DENOMINATOR
        return add_circle(d), d | moved
    if kind == "R2-numerator":
        moved = _R2_NUMERATOR.mirror() if mirror else _R2_NUMERATOR
        return add_circle(add_circle(d)), d | moved
    clasp = _CLASP_DENOMINATOR if kind == "fourmove" else _CLASP_NUMERATOR
    return d | clasp, d | clasp.mirror()
