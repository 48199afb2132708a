"""Independent reference implementations used to check the package.

Nothing here calls the routine it is meant to check; each oracle takes the
most direct (and slow) route to the same answer.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from entropic.magma import EventualSequence, FiniteMagma, affine_magma


# -- magmas ----------------------------------------------------------------------


def table_op(table):
    return lambda a, b: table[a - 1][b - 1]


def entropic_by_definition(table) -> bool:
    op = table_op(table)
    n = len(table)
    return all(
        op(op(a, b), op(c, d)) == op(op(a, c), op(b, d))
        for a, b, c, d in itertools.product(range(1, n + 1), repeat=4)
    )


def example_magma() -> FiniteMagma:
    return FiniteMagma(((2, 1, 3, 4), (1, 4, 3, 2), (3, 3, 3, 3), (4, 2, 3, 1)))


def bracket_magmas():
    """Entropic magmas with sequences passing both bracket conditions."""
    return [
        ("example", example_magma(), EventualSequence.repeat(1, 2, 4)),
        ("affine5", affine_magma(5, 2, 3, 0), EventualSequence.repeat(2, 3, 5, 4)),
        ("affine13", affine_magma(13, 2, 7, 0), EventualSequence.repeat(2, 13)),
    ]


NON_ENTROPIC = FiniteMagma(((1, 2), (1, 1)))


# -- free magma expressions ------------------------------------------------------


def tree_from_leaves(leaves):
    """Nested pairs for a full binary tree read left to right."""
    nodes = list(leaves)
    while len(nodes) > 1:
        nodes = [(nodes[i], nodes[i + 1]) for i in range(0, len(nodes), 2)]
    return nodes[0]


def eval_tree(tree, op, seq):
    if isinstance(tree, int):
        return seq(tree)
    return op(eval_tree(tree[0], op, seq), eval_tree(tree[1], op, seq))


def shift_tree(tree, by=1):
    if isinstance(tree, int):
        return tree + by
    return (shift_tree(tree[0], by), shift_tree(tree[1], by))


def line_tree(n):
    """``P(L_n) = P(L_{n-1}) * shift(P(L_{n-1}))`` with ``P(L_0) = a_1``."""
    t = 1
    for _ in range(n):
        t = (t, shift_tree(t))
    return t


def cycle_tree(n):
    """``P(C_1) = a_2 * a_1`` and ``P(C_n) = P(C_{n-1}) * P(L_{n-1})``."""
    t = (2, 1)
    for k in range(2, n + 1):
        t = (t, line_tree(k - 1))
    return t


def doubled_cycle_tree(n):
    """``P(C'_n) = (shift(P(C_{n-1})) * P(C_{n-1})) * P(C_n)``."""
    prev = cycle_tree(n - 1)
    return ((shift_tree(prev), prev), cycle_tree(n))


# -- links ---------------------------------------------------------------------


def circles_by_search(crossings, free, state):
    """Count loops by graph search over arc labels joined at each smoothing."""
    adj: dict[int, set[int]] = {}
    for c, s in zip(crossings, state):
        a, b, cc, d = c
        pairs = ((a, b), (cc, d)) if s == 0 else ((b, cc), (d, a))
        for x, y in pairs:
            adj.setdefault(x, set()).add(y)
            adj.setdefault(y, set()).add(x)
    seen = set()
    comps = 0
    for start in adj:
        if start in seen:
            continue
        comps += 1
        stack = [start]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x] - seen)
    return comps + free


def recursive_bracket(op, seq, crossings, free, state=()):
    """``P(L) = P(L_0) * P(L_inf)`` expanded one crossing at a time."""
    if len(state) == len(crossings):
        return seq(circles_by_search(crossings, free, state))
    return op(
        recursive_bracket(op, seq, crossings, free, state + (0,)),
        recursive_bracket(op, seq, crossings, free, state + (1,)),
    )


def _laurent_add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _laurent_mul(p, q):
    out: dict[int, int] = {}
    for (i, a), (j, b) in itertools.product(p.items(), q.items()):
        out[i + j] = out.get(i + j, 0) + a * b
    return {k: v for k, v in out.items() if v}


LOOP = {2: -1, -2: -1}


def _loop_power(k):
    out = {0: 1}
    for _ in range(k):
        out = _laurent_mul(out, LOOP)
    return out


def kauffman_bracket(crossings, free):
    """State sum of ``A^(#0 - #inf) d^(circles - 1)`` with ``d = -A^2 - A^-2``."""
    total: dict[int, int] = {}
    for state in itertools.product((0, 1), repeat=len(crossings)):
        zeros = state.count(0)
        weight = {zeros - (len(state) - zeros): 1}
        term = _laurent_mul(weight, _loop_power(circles_by_search(crossings, free, state) - 1))
        total = _laurent_add(total, term)
    return total


# -- graphs --------------------------------------------------------------------


def _components(vertices, pairs):
    parent = list(range(vertices + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(1, vertices + 1)})


def residual_vertices(vertices, edges, chosen):
    """Vertices left after contracting ``chosen`` (loops via //) and deleting the rest.

    Every contracted edge either merges two classes or, being a loop by then,
    adds a vertex, so the count is components plus nullity of ``chosen``.
    """
    pairs = [(e[0], e[1]) for e, keep in zip(edges, chosen) if keep]
    comps = _components(vertices, pairs)
    rank = vertices - comps
    return comps + len(pairs) - rank


def graph_state_bracket(vertices, edges):
    """Kauffman bracket of the medial link summed over edge subsets.

    A positive edge in the subset is a 0-smoothing, a negative one an
    inf-smoothing.
    """
    total: dict[int, int] = {}
    for chosen in itertools.product((True, False), repeat=len(edges)):
        zeros = sum(1 for e, c in zip(edges, chosen) if (e[2] == 1) == c)
        weight = {zeros - (len(edges) - zeros): 1}
        loops = residual_vertices(vertices, edges, chosen)
        total = _laurent_add(total, _laurent_mul(weight, _loop_power(loops - 1)))
    return total


# -- integer matrices ----------------------------------------------------------


def det_fraction(rows):
    """Determinant by Gaussian elimination over the rationals."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for i in range(n):
        pivot = next((r for r in range(i, n) if a[r][i] != 0), None)
        if pivot is None:
            return 0
        if pivot != i:
            a[i], a[pivot] = a[pivot], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            for c in range(i, n):
                a[r][c] -= f * a[i][c]
    return int(det)


def invariant_factors_by_minors(rows):
    """``d_k / d_{k-1}`` where ``d_k`` is the gcd of all k-by-k minors."""
    if not rows or not rows[0]:
        return []
    m, n = len(rows), len(rows[0])
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = math.gcd(g, det_fraction([[rows[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


# -- cochains ------------------------------------------------------------------


def extension_table(magma, m, t, s, a0, f):
    """``(a1, x1)(a2, x2) = (t a1 + s a2 + a0 + f(x1, x2), x1 x2)`` listed pair by pair."""
    n = magma.order
    pairs = list(itertools.product(range(m), range(1, n + 1)))
    index = {p: i + 1 for i, p in enumerate(pairs)}
    return tuple(
        tuple(
            index[((t * a1 + s * a2 + a0 + f[(x1 - 1) * n + (x2 - 1)]) % m, magma.op(x1, x2))]
            for a2, x2 in pairs
        )
        for a1, x1 in pairs
    )


def brute_force_h2(magma, m, t, s, a0):
    """Order statistics of cocycles modulo coboundaries, by listing every 2-cochain.

    A cochain counts as a cocycle when its extension is entropic. The
    coboundary of ``c`` is the cochain moved to zero by ``(a, x) -> (a + c(x), x)``.
    Returns ``{order: count}`` over the classes, which pins a finite abelian
    group of this size.
    """
    n = magma.order
    el = range(1, n + 1)
    cochains = itertools.product(range(m), repeat=n * n)
    cocycles = [f for f in cochains if entropic_by_definition(extension_table(magma, m, t, s, a0, f))]
    boundaries = {
        tuple((t * c[a - 1] + s * c[b - 1] - c[magma.op(a, b) - 1]) % m for a in el for b in el)
        for c in itertools.product(range(m), repeat=n)
    }
    seen = set()
    orders: dict[int, int] = {}
    for f in cocycles:
        if f in seen:
            continue
        seen |= {tuple((x + y) % m for x, y in zip(f, b)) for b in boundaries}
        k = 1
        while tuple((k * x) % m for x in f) not in boundaries:
            k += 1
        orders[k] = orders.get(k, 0) + 1
    return orders


def group_order_stats(torsion, free=0):
    """``{order: count}`` for the finite group ``Z_{d1} + Z_{d2} + ...``."""
    if free:
        raise ValueError("infinite group")
    out: dict[int, int] = {}
    for element in itertools.product(*[range(d) for d in torsion]):
        k = 1
        for x, d in zip(element, torsion):
            k = math.lcm(k, d // math.gcd(x, d))
        out[k] = out.get(k, 0) + 1
    return out
