"""Symbolic products over the distinguished elements ``a_1, a_2, ...``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .magma import EventualSequence, FiniteMagma, MagmaError


@dataclass(frozen=True)
class Leaf:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise MagmaError("leaf index must be >= 1")

    def __str__(self) -> str:
        return f"a_{self.index}"


@dataclass(frozen=True)
class Product:
    left: "MagmaExpr"
    right: "MagmaExpr"

    def __str__(self) -> str:
        return f"({self.left}*{self.right})"


MagmaExpr = Union[Leaf, Product]


def a(i: int) -> Leaf:
    return Leaf(i)


def mul(x: MagmaExpr, y: MagmaExpr) -> Product:
    return Product(x, y)


def expr_shift(e: MagmaExpr, by: int = 1) -> MagmaExpr:
    """Replace every leaf ``a_i`` by ``a_{i+by}``."""
    if isinstance(e, Leaf):
        return Leaf(e.index + by)
    return Product(expr_shift(e.left, by), expr_shift(e.right, by))


def expr_eval(e: MagmaExpr, magma: FiniteMagma, seq: EventualSequence) -> int:
    if isinstance(e, Leaf):
        return seq(e.index)
    return magma.op(expr_eval(e.left, magma, seq), expr_eval(e.right, magma, seq))


def leaves(e: MagmaExpr) -> list[int]:
    if isinstance(e, Leaf):
        return [e.index]
    return leaves(e.left) + leaves(e.right)


_TOKEN = re.compile(r"\s*(a_?(\d+)|\(|\)|\*)")


def parse_expr(text: str) -> MagmaExpr:
    """Parse ``((a_1*a_2)*(a_2*a_3))``-style text; ``*`` is left-associative."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MagmaError(f"cannot parse expression near {text[pos:]!r}")
        tokens.append(m.group(2) if m.group(2) else m.group(1).strip())
        pos = m.end()
    items = iter(tokens + [None])
    current = [next(items)]

    def advance():
        current[0] = next(items)

    def atom() -> MagmaExpr:
        tok = current[0]
        if tok == "(":
            advance()
            e = product()
            if current[0] != ")":
                raise MagmaError("unbalanced parentheses")
            advance()
            return e
        if tok is not None and tok.isdigit():
            advance()
            return Leaf(int(tok))
        raise MagmaError(f"unexpected token {tok!r}")

    def product() -> MagmaExpr:
        e = atom()
        while current[0] == "*":
            advance()
            e = Product(e, atom())
        return e

    e = product()
    if current[0] is not None:
        raise MagmaError(f"trailing input at {current[0]!r}")
    return e


# closed forms for the line, cycle and doubled-cycle graph families

def line_form(n: int) -> MagmaExpr:
    """``P(L_n) = P(L_{n-1}) * shift(P(L_{n-1}))`` with ``P(L_0) = a_1``."""
    e: MagmaExpr = Leaf(1)
    for _ in range(n):
        e = Product(e, expr_shift(e))
    return e


def cycle_form(n: int) -> MagmaExpr:
    """``P(C_n) = P(C_{n-1}) * P(L_{n-1})`` with ``P(C_1) = a_2 * a_1``."""
    if n < 1:
        raise MagmaError("cycle needs n >= 1")
    e: MagmaExpr = Product(Leaf(2), Leaf(1))
    for k in range(2, n + 1):
        e = Product(e, line_form(k - 1))
    return e


def doubled_cycle_form(n: int) -> MagmaExpr:
    """``P(C'_n) = (shift(P(C_{n-1})) * P(C_{n-1})) * P(C_n)``."""
    if n < 2:
        raise MagmaError("doubled cycle needs n >= 2")
    prev = cycle_form(n - 1)
    return Product(Product(expr_shift(prev), prev), cycle_form(n))
