"""Extensions of an entropic magma by an affine magma on Z_m, and their cohomology.

Coefficients live in Z_m for ``m >= 1``; ``m = 0`` means the integers. The
affine magma on the coefficients is ``a * b = t a + s b + a0``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .intlin import (
    HomologyResult,
    SparseIntMatrix,
    quotient_structure,
    smith_normal_form,
    solve_integer,
)
from .magma import CheckResult, FiniteMagma, MagmaError, is_entropic

EXTENSION_LIMIT = 64
COHOMOLOGY_LIMIT = 8


@dataclass(frozen=True)
class AffineAction:
    m: int
    t: int
    s: int
    a0: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise MagmaError("modulus must be >= 0 (0 means the integers)")

    def reduce(self, v: int) -> int:
        return v % self.m if self.m else v

    def apply(self, a: int, b: int) -> int:
        return self.reduce(self.t * a + self.s * b + self.a0)


Cochain1 = tuple[int, ...]
Cochain2 = tuple[tuple[int, ...], ...]


def cochain1(values: Sequence[int]) -> Cochain1:
    return tuple(int(v) for v in values)


def cochain2(rows: Sequence[Sequence[int]]) -> Cochain2:
    return tuple(tuple(int(v) for v in r) for r in rows)


def zero_cochain2(n: int) -> Cochain2:
    return tuple((0,) * n for _ in range(n))


def _check_sizes(f: Cochain2, magma: FiniteMagma) -> None:
    n = magma.order
    if len(f) != n or any(len(r) != n for r in f):
        raise MagmaError(f"2-cochain must be an {n}x{n} table")


def coboundary(c: Cochain1, act: AffineAction, magma: FiniteMagma) -> Cochain2:
    """``(dc)(x1, x2) = t c(x1) + s c(x2) - c(x1 * x2)``."""
    n = magma.order
    if len(c) != n:
        raise MagmaError(f"1-cochain must have {n} values")
    return tuple(
        tuple(act.reduce(act.t * c[x1 - 1] + act.s * c[x2 - 1] - c[magma.op(x1, x2) - 1]) for x2 in magma.elements)
        for x1 in magma.elements
    )


def cocycle_defect(f: Cochain2, act: AffineAction, magma: FiniteMagma, x1: int, x2: int, x3: int, x4: int) -> int:
    op = magma.op
    t, s = act.t, act.s

    def F(a, b):
        return f[a - 1][b - 1]

    value = (
        t * F(x1, x2) - t * F(x1, x3) + s * F(x3, x4) - s * F(x2, x4)
        + F(op(x1, x2), op(x3, x4)) - F(op(x1, x3), op(x2, x4))
    )
    return act.reduce(value)


def is_entropic_cocycle(f: Cochain2, act: AffineAction, magma: FiniteMagma) -> CheckResult:
    _check_sizes(f, magma)
    if not is_entropic(magma):
        raise MagmaError("magma is not entropic")
    for xs in itertools.product(magma.elements, repeat=4):
        defect = cocycle_defect(f, act, magma, *xs)
        if defect:
            return CheckResult(False, xs, f"cocycle condition fails at {xs}: defect {defect}")
    return CheckResult(True)


def _pair_index(a: int, x: int, n: int) -> int:
    return a * n + x


def build_extension(magma: FiniteMagma, act: AffineAction, f: Cochain2) -> FiniteMagma:
    """``(a1, x1) * (a2, x2) = (t a1 + s a2 + a0 + f(x1, x2), x1 * x2)`` on Z_m x X.

    The pair ``(a, x)`` is element ``a * |X| + x`` (pairs in lexicographic order).
    """
    _check_sizes(f, magma)
    n = magma.order
    if act.m == 0:
        raise MagmaError("extensions need a finite coefficient group (m >= 1)")
    if act.m * n > EXTENSION_LIMIT:
        raise MagmaError(f"extension would have {act.m * n} elements, above {EXTENSION_LIMIT}")
    rows = []
    for a1, x1 in itertools.product(range(act.m), magma.elements):
        row = []
        for a2, x2 in itertools.product(range(act.m), magma.elements):
            a = act.reduce(act.t * a1 + act.s * a2 + act.a0 + f[x1 - 1][x2 - 1])
            row.append(_pair_index(a, magma.op(x1, x2), n))
        rows.append(tuple(row))
    return FiniteMagma(tuple(rows))


def extension_pair(index: int, n: int) -> tuple[int, int]:
    """Inverse of the pair numbering: element -> ``(a, x)``."""
    a, x = divmod(index - 1, n)
    return a, x + 1


# -- dynamical cocycles -----------------------------------------------------------


@dataclass(frozen=True)
class DynamicalCocycle:
    """``phi[a1-1][a2-1][x1-1][x2-1]`` in ``1..|A|``."""

    table: tuple

    @classmethod
    def from_function(cls, a_order: int, x_order: int, fn: Callable[[int, int, int, int], int]) -> "DynamicalCocycle":
        A, X = range(1, a_order + 1), range(1, x_order + 1)
        return cls(tuple(tuple(tuple(tuple(fn(a1, a2, x1, x2) for x2 in X) for x1 in X) for a2 in A) for a1 in A))

    @property
    def a_order(self) -> int:
        return len(self.table)

    @property
    def x_order(self) -> int:
        return len(self.table[0][0])

    def __call__(self, a1: int, a2: int, x1: int, x2: int) -> int:
        return self.table[a1 - 1][a2 - 1][x1 - 1][x2 - 1]


def dynamical_extension(phi: DynamicalCocycle, magma: FiniteMagma) -> FiniteMagma:
    n = magma.order
    if phi.x_order != n:
        raise MagmaError("cocycle and magma disagree on |X|")
    rows = []
    for a1, x1 in itertools.product(range(1, phi.a_order + 1), magma.elements):
        rows.append(
            tuple(
                _pair_index(phi(a1, a2, x1, x2) - 1, magma.op(x1, x2), n)
                for a2, x2 in itertools.product(range(1, phi.a_order + 1), magma.elements)
            )
        )
    return FiniteMagma(tuple(rows))


def affine_dynamical_cocycle(f: Cochain2, act: AffineAction, magma: FiniteMagma) -> DynamicalCocycle:
    """``phi(a1, a2, x1, x2) = t a1 + s a2 + a0 + f(x1, x2)``, with residue ``r`` as element ``r + 1``."""
    if act.m == 0:
        raise MagmaError("a dynamical cocycle table needs m >= 1")
    return DynamicalCocycle.from_function(
        act.m,
        magma.order,
        lambda a1, a2, x1, x2: act.reduce(act.t * (a1 - 1) + act.s * (a2 - 1) + act.a0 + f[x1 - 1][x2 - 1]) + 1,
    )


DYNAMICAL_MODES = ("entropic", "associative")


def is_dynamical_cocycle(phi: DynamicalCocycle, magma: FiniteMagma, mode: str) -> CheckResult:
    if mode not in DYNAMICAL_MODES:
        raise MagmaError(f"unknown mode {mode!r}")
    if phi.x_order != magma.order:
        raise MagmaError("cocycle and magma disagree on |X|")
    op = magma.op
    A = range(1, phi.a_order + 1)
    X = magma.elements
    if mode == "associative":
        if not magma.is_associative():
            raise MagmaError("X-structure is not associative")
        for a1, a2, a3 in itertools.product(A, repeat=3):
            for x1, x2, x3 in itertools.product(X, repeat=3):
                left = phi(phi(a1, a2, x1, x2), a3, op(x1, x2), x3)
                right = phi(a1, phi(a2, a3, x2, x3), x1, op(x2, x3))
                if left != right:
                    w = (a1, a2, a3, x1, x2, x3)
                    return CheckResult(False, w, f"associative condition fails at {w}: {left} != {right}")
        return CheckResult(True)
    if not is_entropic(magma):
        raise MagmaError("X-structure is not entropic")
    for a1, a2, a3, a4 in itertools.product(A, repeat=4):
        for x1, x2, x3, x4 in itertools.product(X, repeat=4):
            left = phi(phi(a1, a2, x1, x2), phi(a3, a4, x3, x4), op(x1, x2), op(x3, x4))
            right = phi(phi(a1, a3, x1, x3), phi(a2, a4, x2, x4), op(x1, x3), op(x2, x4))
            if left != right:
                w = (a1, a2, a3, a4, x1, x2, x3, x4)
                return CheckResult(False, w, f"entropic condition fails at {w}: {left} != {right}")
    return CheckResult(True)


# -- linear algebra over Z_m --------------------------------------------------------


def coboundary_matrix(act: AffineAction, magma: FiniteMagma) -> SparseIntMatrix:
    """Rows ``(x1, x2)`` in lexicographic order, columns ``x``."""
    n = magma.order
    entries: dict[tuple[int, int], int] = {}
    for x1, x2 in itertools.product(magma.elements, repeat=2):
        r = (x1 - 1) * n + (x2 - 1)
        for col, v in ((x1, act.t), (x2, act.s), (magma.op(x1, x2), -1)):
            key = (r, col - 1)
            entries[key] = entries.get(key, 0) + v
    return SparseIntMatrix(n * n, n, {k: v for k, v in entries.items() if v})


def cocycle_matrix(act: AffineAction, magma: FiniteMagma) -> SparseIntMatrix:
    """One row per distinct nonzero instance of the cocycle condition; columns ``(x1, x2)``."""
    n = magma.order
    op = magma.op
    rows = set()
    for x1, x2, x3, x4 in itertools.product(magma.elements, repeat=4):
        row: dict[int, int] = {}
        for (a, b), v in (
            ((x1, x2), act.t),
            ((x1, x3), -act.t),
            ((x3, x4), act.s),
            ((x2, x4), -act.s),
            ((op(x1, x2), op(x3, x4)), 1),
            ((op(x1, x3), op(x2, x4)), -1),
        ):
            k = (a - 1) * n + (b - 1)
            row[k] = row.get(k, 0) + v
        row = {k: v for k, v in row.items() if v}
        if row:
            rows.add(tuple(sorted(row.items())))
    ordered = sorted(rows)
    return SparseIntMatrix(
        len(ordered), n * n, {(i, k): v for i, r in enumerate(ordered) for k, v in r}
    )


def _flatten(f: Cochain2) -> list[int]:
    return [v for row in f for v in row]


def _solve_mod(a: SparseIntMatrix, b: Sequence[int], m: int) -> list[int] | None:
    """Some ``y`` with ``a y = b`` (mod m), or None."""
    if m == 0:
        return solve_integer(a, b)
    entries = dict(a.entries)
    for i in range(a.rows):
        entries[(i, a.cols + i)] = m
    aug = SparseIntMatrix(a.rows, a.cols + a.rows, entries)
    z = solve_integer(aug, b)
    return None if z is None else [v % m for v in z[: a.cols]]


def extensions_equivalent(f1: Cochain2, f2: Cochain2, act: AffineAction, magma: FiniteMagma) -> Cochain1 | None:
    """A ``c`` with ``dc = f1 - f2``, or None when the extensions are inequivalent.

    Over Z_m the witness is the lexicographically least one in ``0..m-1``;
    over the integers any witness is returned.
    """
    _check_sizes(f1, magma)
    _check_sizes(f2, magma)
    n = magma.order
    m = act.m
    B = coboundary_matrix(act, magma)
    target = [act.reduce(x - y) for x, y in zip(_flatten(f1), _flatten(f2))]
    found = _solve_mod(B, target, m)
    if found is None:
        return None
    if m == 0:
        return tuple(found)
    fixed: list[int] = []
    columns = B.columns()
    for x in range(n):
        for v in range(m):
            trial = fixed + [v]
            rest = [
                target[r] - sum(columns[j][r] * trial[j] for j in range(len(trial))) for r in range(B.rows)
            ]
            sub = SparseIntMatrix(
                B.rows, n - len(trial), {(i, j - len(trial)): w for (i, j), w in B.entries.items() if j >= len(trial)}
            )
            if n - len(trial) == 0:
                ok = all(val % m == 0 for val in rest)
            else:
                ok = _solve_mod(sub, rest, m) is not None
            if ok:
                fixed = trial
                break
        else:
            raise AssertionError("lost solvability while fixing coordinates")
    witness = tuple(fixed)
    assert coboundary(witness, act, magma) == tuple(
        tuple(target[i * n + j] for j in range(n)) for i in range(n)
    )
    return witness


def cocycle_lattice(act: AffineAction, magma: FiniteMagma) -> list[list[int]]:
    """Integer vectors whose reductions are exactly the cocycles (plus ``m Z^N`` when m >= 1)."""
    n = magma.order
    N = n * n
    C = cocycle_matrix(act, magma)
    m = act.m
    if C.rows == 0:
        return [[int(i == j) for i in range(N)] for j in range(N)]
    snf = smith_normal_form(C, want_u=False, want_v=True)
    V = snf.V
    basis = []
    for k in range(N):
        col = V.column(k)
        d = snf.diagonal[k] if k < len(snf.diagonal) else 0
        if d:
            # d g = 0 (mod m) forces g into (m / gcd(d, m)) Z; over Z it forces g = 0
            if m == 0:
                continue
            col = [m // math.gcd(d, m) * v for v in col]
        basis.append(col)
    return basis


def second_cohomology(magma: FiniteMagma, act: AffineAction) -> HomologyResult:
    """Cocycles modulo coboundaries, over Z_m (or Z for m = 0)."""
    n = magma.order
    if n > COHOMOLOGY_LIMIT:
        raise MagmaError(f"|X| = {n} exceeds the limit {COHOMOLOGY_LIMIT}")
    if not is_entropic(magma):
        raise MagmaError("magma is not entropic")
    N = n * n
    kernel = cocycle_lattice(act, magma)
    image = coboundary_matrix(act, magma).columns()
    if act.m:
        image += [[act.m * int(i == j) for i in range(N)] for j in range(N)]
    return quotient_structure(kernel, image)
