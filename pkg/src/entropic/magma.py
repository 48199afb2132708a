"""Finite magmas, distinguished sequences and the identities checked on them.

Elements are the integers ``1..n``; row ``a`` of a table holds the products
``a * b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence


class MagmaError(ValueError):
    """Raised for malformed magmas or violated preconditions."""


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an exhaustive identity check.

    Truthiness follows ``ok`` so a result can be used directly in ``if``.
    ``witness`` holds the first failing arguments and ``detail`` the
    instantiated identity.
    """

    ok: bool
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FiniteMagma:
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        n = len(table)
        if n == 0:
            raise MagmaError("magma must have at least one element")
        for row in table:
            if len(row) != n:
                raise MagmaError(f"table is not {n}x{n}")
            for v in row:
                if not 1 <= v <= n:
                    raise MagmaError(f"entry {v} outside 1..{n}")
        object.__setattr__(self, "table", table)

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(1, self.order + 1)

    def op(self, a: int, b: int) -> int:
        return self.table[a - 1][b - 1]

    __call__ = op

    @classmethod
    def from_function(cls, n: int, fn) -> "FiniteMagma":
        return cls(tuple(tuple(fn(a, b) for b in range(1, n + 1)) for a in range(1, n + 1)))

    @classmethod
    def left_projection(cls, n: int) -> "FiniteMagma":
        return cls.from_function(n, lambda a, b: a)

    @classmethod
    def right_projection(cls, n: int) -> "FiniteMagma":
        return cls.from_function(n, lambda a, b: b)

    def is_quasigroup(self) -> bool:
        full = set(self.elements)
        rows_ok = all(set(row) == full for row in self.table)
        cols_ok = all(set(col) == full for col in zip(*self.table))
        return rows_ok and cols_ok

    def is_associative(self) -> bool:
        op = self.op
        return all(
            op(op(a, b), c) == op(a, op(b, c))
            for a, b, c in itertools.product(self.elements, repeat=3)
        )


@dataclass(frozen=True)
class EventualSequence:
    """An eventually periodic sequence ``a_1, a_2, ...``."""

    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = (1,)

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(v) for v in self.preperiod))
        object.__setattr__(self, "period", tuple(int(v) for v in self.period))
        if not self.period:
            raise MagmaError("period must be nonempty")
        if any(v < 1 for v in self.preperiod + self.period):
            raise MagmaError("sequence values must be positive")

    @classmethod
    def repeat(cls, *values: int) -> "EventualSequence":
        return cls((), tuple(values))

    def __call__(self, k: int) -> int:
        if k < 1:
            raise MagmaError(f"sequence index {k} < 1")
        p = len(self.preperiod)
        if k <= p:
            return self.preperiod[k - 1]
        return self.period[(k - p - 1) % len(self.period)]

    def shifted(self, by: int = 1) -> "EventualSequence":
        """The sequence ``k -> a_{k+by}``."""
        p = len(self.preperiod)
        if by <= p:
            return EventualSequence(self.preperiod[by:], self.period)
        r = (by - p) % len(self.period)
        return EventualSequence((), self.period[r:] + self.period[:r])

    def window_bound(self, width: int = 0) -> int:
        """Largest start index that must be checked for identities reading ``a_n..a_{n+width}``."""
        return len(self.preperiod) + len(self.period) + width

    def fits(self, magma: FiniteMagma) -> bool:
        return all(v <= magma.order for v in self.preperiod + self.period)


def _check_seq(magma: FiniteMagma, seq: EventualSequence) -> None:
    if not seq.fits(magma):
        raise MagmaError("sequence values exceed magma order")


def is_entropic(magma: FiniteMagma) -> CheckResult:
    op = magma.op
    for a, b, c, d in itertools.product(magma.elements, repeat=4):
        left = op(op(a, b), op(c, d))
        right = op(op(a, c), op(b, d))
        if left != right:
            return CheckResult(
                False,
                (a, b, c, d),
                f"({a}*{b})*({c}*{d}) = {left} != {right} = ({a}*{c})*({b}*{d})",
            )
    return CheckResult(True)


def check_bracket_conditions(magma: FiniteMagma, seq: EventualSequence, variant: str) -> CheckResult:
    """Check the R2 conditions (variant ``"i"`` or ``"ii"``) for every n >= 1."""
    _check_seq(magma, seq)
    if variant not in ("i", "ii"):
        raise MagmaError(f"unknown variant {variant!r}")
    op = magma.op
    for n in range(1, seq.window_bound(2) + 1):
        a0, a1, a2 = seq(n), seq(n + 1), seq(n + 2)
        if variant == "i":
            first = op(op(a1, a0), op(a2, a1))
            second = op(op(a1, a2), op(a0, a1))
            if first != a0 or second != a0:
                return CheckResult(
                    False,
                    (n,),
                    f"n={n}: ({a1}*{a0})*({a2}*{a1}) = {first}, "
                    f"({a1}*{a2})*({a0}*{a1}) = {second}, a_n = {a0}",
                )
        else:
            value = op(op(a0, a1), op(a1, a0))
            if value != a1:
                return CheckResult(
                    False, (n,), f"n={n}: ({a0}*{a1})*({a1}*{a0}) = {value} != {a1} = a_(n+1)"
                )
    return CheckResult(True)


def check_4move_condition(magma: FiniteMagma, seq: EventualSequence) -> CheckResult:
    _check_seq(magma, seq)
    op = magma.op
    for n in range(1, seq.window_bound(2) + 1):
        a0, a1, a2 = seq(n), seq(n + 1), seq(n + 2)
        left = op(op(a0, a1), op(a1, a2))
        right = op(op(a2, a1), op(a1, a0))
        if left != right:
            return CheckResult(
                False,
                (n,),
                f"n={n}: ({a0}*{a1})*({a1}*{a2}) = {left} != {right} = ({a2}*{a1})*({a1}*{a0})",
            )
    return CheckResult(True)


# -- congruences --------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Equivalence classes on ``1..n``; ``rep[x-1]`` is the least element of x's class."""

    rep: tuple[int, ...]

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_classes(cls, n: int, classes: Sequence[Sequence[int]]) -> "Partition":
        rep = list(range(1, n + 1))
        for block in classes:
            low = min(block)
            for x in block:
                rep[x - 1] = low
        return cls(tuple(rep))

    def classes(self) -> list[tuple[int, ...]]:
        groups: dict[int, list[int]] = {}
        for x, r in enumerate(self.rep, start=1):
            groups.setdefault(r, []).append(x)
        return [tuple(groups[r]) for r in sorted(groups)]

    def __call__(self, x: int) -> int:
        return self.rep[x - 1]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n + 1))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry
        return True


def congruence_closure(magma: FiniteMagma, pairs) -> Partition:
    """Least congruence containing ``pairs`` (worklist over a union-find)."""
    n = magma.order
    uf = _UnionFind(n)
    work = []
    for x, y in pairs:
        if not (1 <= x <= n and 1 <= y <= n):
            raise MagmaError(f"pair ({x}, {y}) outside 1..{n}")
        work.append((x, y))
    op = magma.op
    while work:
        x, y = work.pop()
        if not uf.union(x, y):
            continue
        # x ~ y now; translates by every c must follow
        for c in magma.elements:
            work.append((op(x, c), op(y, c)))
            work.append((op(c, x), op(c, y)))
    return Partition(tuple(uf.find(x) for x in range(1, n + 1)))


def quotient_magma(magma: FiniteMagma, partition: Partition) -> FiniteMagma:
    if len(partition.rep) != magma.order:
        raise MagmaError("partition size does not match magma order")
    reps = sorted(set(partition.rep))
    index = {r: i + 1 for i, r in enumerate(reps)}
    table = []
    for ra in reps:
        row = []
        for rb in reps:
            row.append(index[partition(magma.op(ra, rb))])
        table.append(row)
    # compatibility over all members, not just representatives
    for a in magma.elements:
        for b in magma.elements:
            if index[partition(magma.op(a, b))] != table[index[partition(a)] - 1][index[partition(b)] - 1]:
                raise MagmaError(f"not a congruence: {a}*{b} leaves its class")
    return FiniteMagma(tuple(tuple(r) for r in table))


# -- affine magmas and the Toyoda decomposition -------------------------------


def affine_magma(m: int, t: int, s: int, a0: int) -> FiniteMagma:
    """``a * b = t a + s b + a0`` on Z_m; element ``k`` encodes residue ``k - 1``."""
    if m < 1:
        raise MagmaError("modulus must be >= 1")
    return FiniteMagma.from_function(m, lambda a, b: (t * (a - 1) + s * (b - 1) + a0) % m + 1)


@dataclass(frozen=True)
class ToyodaDecomposition:
    """``a * b = f(a) + g(b) + c`` over an abelian group given by its table."""

    add: FiniteMagma
    zero: int
    f: tuple[int, ...]
    g: tuple[int, ...]
    c: int

    def compose(self, a: int, b: int) -> int:
        add = self.add.op
        return add(add(self.f[a - 1], self.g[b - 1]), self.c)


def _is_abelian_group(add: FiniteMagma, zero: int) -> bool:
    op = add.op
    els = add.elements
    if any(op(zero, x) != x for x in els):
        return False
    if any(op(x, y) != op(y, x) for x in els for y in els):
        return False
    if any(zero not in (op(x, y) for y in els) for x in els):
        return False
    return all(op(op(x, y), z) == op(x, op(y, z)) for x in els for y in els for z in els)


def _is_automorphism(add: FiniteMagma, h: tuple[int, ...]) -> bool:
    if sorted(h) != list(add.elements):
        return False
    op = add.op
    return all(h[op(x, y) - 1] == op(h[x - 1], h[y - 1]) for x in add.elements for y in add.elements)


def toyoda_decompose(magma: FiniteMagma) -> ToyodaDecomposition:
    """Recover the abelian group and commuting automorphisms of an entropic quasigroup.

    Tries each basepoint ``e``: ``x + y := R_e^-1(x) * L_e^-1(y)``, zero ``e*e``.
    Every claim is verified exhaustively before returning.
    """
    if not magma.is_quasigroup():
        raise MagmaError("not a quasigroup")
    op = magma.op
    els = magma.elements
    for e in els:
        r_inv = {op(x, e): x for x in els}
        l_inv = {op(e, x): x for x in els}
        add = FiniteMagma.from_function(magma.order, lambda x, y: op(r_inv[x], l_inv[y]))
        zero = op(e, e)
        if not _is_abelian_group(add, zero):
            continue
        neg = {x: next(y for y in els if add.op(x, y) == zero) for x in els}
        c = op(zero, zero)
        f = tuple(add.op(op(a, zero), neg[c]) for a in els)
        g = tuple(add.op(op(zero, b), neg[c]) for b in els)
        if not (_is_automorphism(add, f) and _is_automorphism(add, g)):
            continue
        if any(f[g[x - 1] - 1] != g[f[x - 1] - 1] for x in els):
            continue
        result = ToyodaDecomposition(add, zero, f, g, c)
        if all(result.compose(a, b) == op(a, b) for a in els for b in els):
            return result
    raise MagmaError("decomposition not found (magma is not an entropic quasigroup?)")


# -- families -----------------------------------------------------------------


@dataclass(frozen=True)
class MagmaFamily:
    """Magmas on one carrier with a sign per member (the weights of the pairing maps)."""

    members: tuple[FiniteMagma, ...]
    signs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        members = tuple(self.members)
        signs = tuple(self.signs) if self.signs else (1,) * len(members)
        if not members:
            raise MagmaError("family must be nonempty")
        if len({m.order for m in members}) != 1:
            raise MagmaError("family members must share one order")
        if len(signs) != len(members) or any(s not in (1, -1) for s in signs):
            raise MagmaError("signs must be +1/-1, one per member")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "signs", signs)

    @property
    def order(self) -> int:
        return self.members[0].order

    @classmethod
    def with_projections(cls, magma: FiniteMagma, signs=(1, -1, -1)) -> "MagmaFamily":
        n = magma.order
        return cls((magma, FiniteMagma.left_projection(n), FiniteMagma.right_projection(n)), tuple(signs))


def is_compatible_family(family: MagmaFamily) -> CheckResult:
    members = family.members
    for i, mi in enumerate(members):
        for j, mj in enumerate(members):
            for a, b, c, d in itertools.product(mi.elements, repeat=4):
                left = mj(mi(a, b), mi(c, d))
                right = mi(mj(a, c), mj(b, d))
                if left != right:
                    return CheckResult(
                        False,
                        (i + 1, j + 1, a, b, c, d),
                        f"i={i + 1}, j={j + 1}: ({a}*i{b})*j({c}*i{d}) = {left} "
                        f"!= {right} = ({a}*j{c})*i({b}*j{d})",
                    )
    return CheckResult(True)


# -- small utilities ----------------------------------------------------------


def find_isomorphism(m1: FiniteMagma, m2: FiniteMagma, max_order: int = 8) -> tuple[int, ...] | None:
    """Brute-force isomorphism ``phi`` with ``phi(a*b) = phi(a)*phi(b)``, or None."""
    if m1.order != m2.order:
        return None
    n = m1.order
    if n > max_order:
        raise MagmaError(f"isomorphism search limited to order <= {max_order}")
    for perm in itertools.permutations(range(1, n + 1)):
        if all(perm[m1(a, b) - 1] == m2(perm[a - 1], perm[b - 1]) for a in m1.elements for b in m1.elements):
            return perm
    return None


ENUMERATION_FILTERS = ("entropic", "bracket-i", "bracket-ii")


def enumerate_entropic_magmas(
    order: int, filter: str = "entropic", seq: EventualSequence | None = None
) -> Iterator[FiniteMagma]:
    """Stream entropic tables of ``order <= 4`` in lexicographic (row-major) order.

    Cells are filled row-major; each quadruple is checked exactly once, at the
    moment its last needed cell is assigned.
    """
    if not 1 <= order <= 4:
        raise MagmaError("enumeration is limited to orders 1..4")
    if filter not in ENUMERATION_FILTERS:
        raise MagmaError(f"unknown filter {filter!r}")
    if filter != "entropic" and seq is None:
        raise MagmaError(f"filter {filter!r} needs a distinguished sequence")
    variant = filter.split("-")[1] if filter != "entropic" else None

    n = order
    size = n * n
    table = [-1] * size
    by_inner: list[list[tuple[int, int, int, int]]] = [[] for _ in range(size)]
    for a, b, c, d in itertools.product(range(n), repeat=4):
        last = max(a * n + b, c * n + d, a * n + c, b * n + d)
        by_inner[last].append((a * n + b, c * n + d, a * n + c, b * n + d))
    pending: list[list[tuple[int, int]]] = [[] for _ in range(size)]

    def consistent(k: int, added: list) -> bool:
        for ab, cd, ac, bd in by_inner[k]:
            left = table[ab] * n + table[cd]
            right = table[ac] * n + table[bd]
            due = max(left, right)
            if due <= k:
                if table[left] != table[right]:
                    return False
            else:
                pending[due].append((left, right))
                added.append(due)
        return all(table[left] == table[right] for left, right in pending[k])

    def walk(k: int) -> Iterator[FiniteMagma]:
        if k == size:
            magma = FiniteMagma(tuple(tuple(v + 1 for v in table[r * n:(r + 1) * n]) for r in range(n)))
            if variant is None or check_bracket_conditions(magma, seq, variant):
                yield magma
            return
        for v in range(n):
            table[k] = v
            added: list[int] = []
            if consistent(k, added):
                yield from walk(k + 1)
            for due in added:
                pending[due].pop()
        table[k] = -1

    yield from walk(0)
