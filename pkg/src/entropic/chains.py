"""Entropic chain complexes over tuples of magma elements.

Level ``n`` chains are integer combinations of ``2^n``-tuples. Position ``i``
(1-based) carries the address ``binary(i - 1)`` in ``n`` bits; the
permutation differentials shuffle positions whose addresses have the same
number of ones, and ``mu`` multiplies neighbouring pairs.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from scipy import sparse

from .intlin import (
    HomologyResult,
    SmithForm,
    SparseIntMatrix,
    order_in_quotient,
    quotient_structure,
    rank,
    rank_mod_p,
    smith_normal_form,
)
from .magma import FiniteMagma, MagmaError, MagmaFamily

SIZE_GUARD = 2**20

Tuple = tuple[int, ...]


class ChainComplexError(MagmaError):
    pass


class TupleChain:
    """Formal integer combination of ``2^level``-tuples; zero terms are dropped."""

    __slots__ = ("level", "terms")

    def __init__(self, level: int, terms: Mapping[Tuple, int] | Iterable[tuple[Tuple, int]] = ()):
        self.level = level
        width = 2**level
        clean: dict[Tuple, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for t, c in items:
            t = tuple(t)
            if len(t) != width:
                raise MagmaError(f"tuple {t} has length {len(t)}, expected {width}")
            clean[t] = clean.get(t, 0) + c
        self.terms = {t: c for t, c in sorted(clean.items()) if c}

    @classmethod
    def basis(cls, t: Sequence[int]) -> "TupleChain":
        t = tuple(t)
        return cls(_level_of(len(t)), {t: 1})

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, TupleChain):
            return NotImplemented
        return self.level == other.level and self.terms == other.terms

    def __hash__(self):
        return hash((self.level, tuple(self.terms.items())))

    def _check(self, other: "TupleChain") -> None:
        if self.level != other.level:
            raise MagmaError("chains live on different levels")

    def __add__(self, other: "TupleChain") -> "TupleChain":
        self._check(other)
        return TupleChain(self.level, itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self) -> "TupleChain":
        return TupleChain(self.level, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "TupleChain") -> "TupleChain":
        return self + (-other)

    def __rmul__(self, k: int) -> "TupleChain":
        return TupleChain(self.level, {t: k * c for t, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"TupleChain({self.level}, {self.terms!r})"

    def __str__(self) -> str:
        return format_chain(self)


def _level_of(width: int) -> int:
    level = width.bit_length() - 1
    if width < 1 or 2**level != width:
        raise MagmaError(f"tuple length {width} is not a power of two")
    return level


def format_chain(chain: TupleChain) -> str:
    if not chain.terms:
        return "0"
    out = []
    for t, c in chain.terms.items():
        term = f"{abs(c)} ({','.join(map(str, t))})"
        if not out:
            out.append(term if c > 0 else "-" + term)
        else:
            out.append(("+ " if c > 0 else "- ") + term)
    return " ".join(out)


def parse_chain(text: str) -> TupleChain:
    """Parse ``<coeff> (t1,...,t2^n)`` terms joined by ``+``/``-``."""
    import re

    terms = []
    pattern = re.compile(r"([+-]?)\s*(\d*)\s*\(([^)]*)\)")
    pos = 0
    text = text.strip()
    if text == "0":
        raise MagmaError("cannot infer the level of the zero chain")
    for m in pattern.finditer(text):
        if text[pos:m.start()].strip():
            raise MagmaError(f"cannot parse chain near {text[pos:m.start()]!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) else 1
        t = tuple(int(x) for x in m.group(3).split(","))
        terms.append((t, sign * coeff))
    if text[pos:].strip() or not terms:
        raise MagmaError(f"cannot parse chain {text!r}")
    return TupleChain(_level_of(len(terms[0][0])), terms)


# -- addresses and permutation sets --------------------------------------------


def address_ones(n: int, i: int) -> int:
    """Number of ones in the ``n``-bit address of position ``i``."""
    if not 1 <= i <= 2**n:
        raise MagmaError(f"position {i} outside 1..{2**n}")
    return bin(i - 1).count("1")


def positions_with_ones(n: int, k: int) -> tuple[int, ...]:
    return tuple(i for i in range(1, 2**n + 1) if bin(i - 1).count("1") == k)


def _parity(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class SignedPermSet:
    """All permutations of the positions with ``weight`` ones.

    Each entry is ``(images, sign)`` where ``images[j]`` is where position
    ``positions[j]`` is sent.
    """

    level: int
    weight: int
    positions: tuple[int, ...]
    perms: tuple[tuple[tuple[int, ...], int], ...]

    def cycles(self) -> list[tuple[tuple[int, ...], ...]]:
        return [to_cycles(dict(zip(self.positions, images))) for images, _ in self.perms]


@functools.lru_cache(maxsize=None)
def perm_set(n: int, k: int) -> SignedPermSet:
    if not 0 <= k <= n:
        raise MagmaError(f"weight {k} outside 0..{n}")
    pos = positions_with_ones(n, k)
    perms = []
    for p in itertools.permutations(range(len(pos))):
        perms.append((tuple(pos[j] for j in p), _parity(p)))
    return SignedPermSet(n, k, pos, tuple(perms))


def to_cycles(mapping: Mapping[int, int]) -> tuple[tuple[int, ...], ...]:
    """Cycle notation, fixed points dropped, each cycle led by its least entry."""
    seen = set()
    cycles = []
    for start in sorted(mapping):
        if start in seen or mapping[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        j = mapping[start]
        while j != start:
            cycle.append(j)
            seen.add(j)
            j = mapping[j]
        cycles.append(tuple(cycle))
    return tuple(cycles)


def format_cycles(cycles: tuple[tuple[int, ...], ...]) -> str:
    if not cycles:
        return "()"
    return "".join("(" + ", ".join(map(str, c)) + ")" for c in cycles)


def delta_operator(n: int, nu: Sequence[int]) -> dict[tuple[tuple[int, ...], ...], int]:
    """The signed permutation sum as ``{cycle notation: coefficient}``."""
    _check_nu(n, nu)
    out: dict = {}
    for k, weight in enumerate(nu, start=1):
        if not weight:
            continue
        ps = perm_set(n, k)
        for images, sign in ps.perms:
            key = to_cycles(dict(zip(ps.positions, images)))
            out[key] = out.get(key, 0) + weight * sign
    return {key: c for key, c in out.items() if c}


def _check_nu(n: int, nu: Sequence[int]) -> None:
    if n < 2:
        raise MagmaError("permutation differentials need level n >= 2")
    if len(nu) != n - 1:
        raise MagmaError(f"nu must have length {n - 1} at level {n}")


def _permute(t: Tuple, ps: SignedPermSet, images: tuple[int, ...]) -> Tuple:
    out = list(t)
    for src, dst in zip(ps.positions, images):
        out[dst - 1] = t[src - 1]
    return tuple(out)


def _as_chain(c: Union[TupleChain, Sequence[int]]) -> TupleChain:
    return c if isinstance(c, TupleChain) else TupleChain.basis(c)


def delta(n: int, nu: Sequence[int], chain) -> TupleChain:
    chain = _as_chain(chain)
    _check_nu(n, nu)
    if chain.level != n:
        raise MagmaError(f"chain is at level {chain.level}, expected {n}")
    out: dict[Tuple, int] = {}
    for k, weight in enumerate(nu, start=1):
        if not weight:
            continue
        ps = perm_set(n, k)
        for t, c in chain:
            for images, sign in ps.perms:
                key = _permute(t, ps, images)
                out[key] = out.get(key, 0) + weight * sign * c
    return TupleChain(n, out)


def zeta(n: int, chain) -> TupleChain:
    """Swap the two middle entries of every block of four."""
    chain = _as_chain(chain)
    if n < 2 or chain.level != n:
        raise MagmaError("zeta needs a chain at level n >= 2")
    out = {}
    for t, c in chain:
        s = list(t)
        for b in range(0, len(s), 4):
            s[b + 1], s[b + 2] = s[b + 2], s[b + 1]
        out[tuple(s)] = c
    return TupleChain(n, out)


def hat_delta(n: int, nu: Sequence[int], chain) -> TupleChain:
    d = delta(n, nu, chain)
    return d - zeta(n, d)


def mu(magma: FiniteMagma, n: int, chain) -> TupleChain:
    chain = _as_chain(chain)
    if n < 1 or chain.level != n:
        raise MagmaError(f"mu needs a chain at level n = {n} >= 1")
    op = magma.op
    out: dict[Tuple, int] = {}
    for t, c in chain:
        key = tuple(op(t[i], t[i + 1]) for i in range(0, len(t), 2))
        out[key] = out.get(key, 0) + c
    return TupleChain(n - 1, out)


def mu_family(family: MagmaFamily, n: int, chain) -> TupleChain:
    result = TupleChain(n - 1)
    for member, sign in zip(family.members, family.signs):
        result = result + sign * mu(member, n, chain)
    return result


def _mu_any(structure, n: int, chain) -> TupleChain:
    if isinstance(structure, MagmaFamily):
        return mu_family(structure, n, chain)
    return mu(structure, n, chain)


def partial(structure, n: int, nu: Sequence[int], chain) -> TupleChain:
    """``mu o delta`` for a magma, or the signed family version for a ``MagmaFamily``."""
    return _mu_any(structure, n, delta(n, nu, chain))


def hat_partial(structure, n: int, nu: Sequence[int], chain) -> TupleChain:
    return _mu_any(structure, n, hat_delta(n, nu, chain))


def _xi_position(n: int, k: int) -> int | None:
    for s in range(2, 2**n + 1, 4):
        if address_ones(n, s) == k and address_ones(n, s + 1) == k:
            return s
    return None


def xi(n: int, k: int, chain) -> TupleChain:
    """``(s, s+1) w + w`` for the first block of four whose middle pair has ``k`` ones."""
    chain = _as_chain(chain)
    if n < 2 or chain.level != n:
        raise MagmaError("xi needs a chain at level n >= 2")
    s = _xi_position(n, k)
    if s is None:
        raise MagmaError(f"no qualifying four for k={k} at level {n}")
    out: dict[Tuple, int] = {}
    for t, c in chain:
        swapped = list(t)
        swapped[s - 1], swapped[s] = t[s], t[s - 1]
        swapped = tuple(swapped)
        out[t] = out.get(t, 0) + c
        out[swapped] = out.get(swapped, 0) + c
    return TupleChain(n, out)


def make_cycle(n: int, nu: Sequence[int], chain) -> TupleChain:
    """Apply ``xi^1``, then ``xi^2``, ... for each k with a nonzero weight."""
    chain = _as_chain(chain)
    _check_nu(n, nu)
    for k, weight in enumerate(nu, start=1):
        if weight:
            chain = xi(n, k, chain)
    return chain


# -- matrices ------------------------------------------------------------------


def _all_tuples(q: int, width: int) -> np.ndarray:
    idx = np.arange(q**width, dtype=np.int64)
    powers = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def _tuple_index(arr: np.ndarray, q: int) -> np.ndarray:
    width = arr.shape[1]
    powers = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return arr @ powers


def tuple_index(t: Sequence[int], q: int) -> int:
    """Lexicographic index of a tuple of 1-based elements."""
    out = 0
    for x in t:
        out = out * q + (x - 1)
    return out


def index_tuple(index: int, q: int, width: int) -> Tuple:
    out = []
    for _ in range(width):
        index, r = divmod(index, q)
        out.append(r + 1)
    return tuple(reversed(out))


def _members(structure) -> list[tuple[FiniteMagma, int]]:
    if isinstance(structure, MagmaFamily):
        return list(zip(structure.members, structure.signs))
    return [(structure, 1)]


def _operator_terms(n: int, nu: Sequence[int] | None, kind: str) -> list[tuple[np.ndarray, int]]:
    """Column maps (as position-gather arrays) with coefficients for delta or hat-delta."""
    width = 2**n
    ident = np.arange(width)
    if nu is None:
        return [(ident, 1)]
    zeta_perm = ident.copy()
    for b in range(0, width, 4):
        zeta_perm[b + 1], zeta_perm[b + 2] = zeta_perm[b + 2], zeta_perm[b + 1]
    terms = []
    for k, weight in enumerate(nu, start=1):
        if not weight:
            continue
        ps = perm_set(n, k)
        for images, sign in ps.perms:
            gather = ident.copy()
            for src, dst in zip(ps.positions, images):
                gather[dst - 1] = src - 1
            terms.append((gather, weight * sign))
            if kind == "hat":
                terms.append((gather[zeta_perm], -weight * sign))
    return terms


def boundary_matrix(structure, n: int, nu: Sequence[int] | None, kind: str = "plain", force: bool = False) -> SparseIntMatrix:
    """Matrix of ``mu o delta^nu`` (``kind="plain"``) or ``mu^tau o hat-delta^nu``.

    Columns are level-``n`` tuples, rows level-``n-1`` tuples, both in
    lexicographic order. ``nu=None`` gives the bare pairing map.
    """
    if kind not in ("plain", "hat"):
        raise MagmaError(f"unknown boundary kind {kind!r}")
    if n < 1:
        raise MagmaError("boundary maps start at level 1")
    if nu is not None:
        _check_nu(n, nu)
    members = _members(structure)
    q = members[0][0].order
    width = 2**n
    ncols = q**width
    if ncols > SIZE_GUARD and not force:
        raise MagmaError(f"C_{n} has {ncols} generators, above the guard {SIZE_GUARD}; use force")
    cols = _all_tuples(q, width)
    col_idx = np.arange(ncols, dtype=np.int64)
    rows_acc, cols_acc, vals_acc = [], [], []
    for gather, coeff in _operator_terms(n, nu, kind):
        moved = cols[:, gather]
        for magma, sign in members:
            table = np.asarray(magma.table, dtype=np.int64) - 1
            prod = table[moved[:, 0::2], moved[:, 1::2]]
            rows_acc.append(_tuple_index(prod, q))
            cols_acc.append(col_idx)
            vals_acc.append(np.full(ncols, coeff * sign, dtype=np.int64))
    nrows = q ** (width // 2)
    if not vals_acc:
        return SparseIntMatrix(nrows, ncols)
    # entries are bounded by |coeff| * count of terms, far inside int64
    coo = sparse.coo_matrix(
        (np.concatenate(vals_acc), (np.concatenate(rows_acc), np.concatenate(cols_acc))), shape=(nrows, ncols)
    ).tocsr()
    coo.eliminate_zeros()
    coo = coo.tocoo()
    return SparseIntMatrix(
        nrows, ncols, {(int(i), int(j)): int(v) for i, j, v in zip(coo.row, coo.col, coo.data)}
    )


def chain_to_vector(chain: TupleChain, q: int) -> list[int]:
    vec = [0] * (q ** (2**chain.level))
    for t, c in chain:
        vec[tuple_index(t, q)] = c
    return vec


def _to_scipy(m: SparseIntMatrix):
    if not m.entries:
        return sparse.csr_matrix((m.rows, m.cols), dtype=np.int64)
    keys = list(m.entries)
    return sparse.csr_matrix(
        ([m.entries[k] for k in keys], ([k[0] for k in keys], [k[1] for k in keys])),
        shape=(m.rows, m.cols),
        dtype=np.int64,
    )


def composite_witness(first: SparseIntMatrix, second: SparseIntMatrix) -> int | None:
    """Index of a column of ``first @ second`` that is nonzero, else None."""
    prod = (_to_scipy(first) @ _to_scipy(second)).tocsc()
    prod.eliminate_zeros()
    nz = np.flatnonzero(np.diff(prod.indptr))
    return int(nz[0]) if len(nz) else None


def _distinct_columns(m: SparseIntMatrix) -> SparseIntMatrix:
    """Drop zero columns and columns equal up to sign; the column lattice is unchanged."""
    by_col: dict[int, list[tuple[int, int]]] = {}
    for (i, j), v in m.entries.items():
        by_col.setdefault(j, []).append((i, v))
    seen = set()
    kept = []
    for j in sorted(by_col):
        col = tuple(sorted(by_col[j]))
        if col[0][1] < 0:
            col = tuple((i, -v) for i, v in col)
        if col not in seen:
            seen.add(col)
            kept.append(col)
    return SparseIntMatrix(m.rows, len(kept), {(i, j): v for j, col in enumerate(kept) for i, v in col})


# -- homology ------------------------------------------------------------------


def default_nu(n: int) -> tuple[int, ...]:
    return (1,) + (0,) * (n - 2)


def nu_for(nus, level: int) -> tuple[int, ...]:
    if nus is None:
        return default_nu(level)
    if isinstance(nus, Mapping):
        return tuple(nus.get(level, default_nu(level)))
    raise MagmaError("nu choices must be a mapping level -> nu")


def _differential(structure, level: int, nus, kind: str, force: bool) -> SparseIntMatrix | None:
    """``d_level`` of the complex, or None for the zero map out of C_0."""
    if level <= 0:
        return None
    if level == 1:
        return boundary_matrix(structure, 1, None, kind, force)
    return boundary_matrix(structure, level, nu_for(nus, level), kind, force)


@functools.lru_cache(maxsize=32)
def _image_smith(structure, level: int, nu_key, kind: str, force: bool) -> SmithForm:
    nus = dict(nu_key) if nu_key is not None else None
    d = _differential(structure, level, nus, kind, force)
    return smith_normal_form(_distinct_columns(d), want_u=True, want_v=False)


def _nu_key(nus):
    if nus is None:
        return None
    return tuple(sorted((k, tuple(v)) for k, v in nus.items()))


def _check_chain_pair(lower, upper, q: int, n: int) -> None:
    if lower is None or upper is None:
        return
    col = composite_witness(lower, upper)
    if col is not None:
        t = index_tuple(col, q, 2 ** (n + 1))
        raise ChainComplexError(f"not a chain complex: d_{n} d_{n + 1} is nonzero on {t}")


def homology(
    magma: FiniteMagma, n: int, nus=None, coeff: int = 0, force: bool = False
) -> HomologyResult:
    """``H_n = Ker d_n / Im d_{n+1}`` with ``d_1 = mu_1`` and ``d_k = mu o delta^{nu_k}``.

    ``coeff = 0`` means integer coefficients, ``coeff = p`` the field F_p.
    Torsion of the quotient is read off the elementary divisors of
    ``d_{n+1}``: ``C_n / Ker d_n`` embeds in a free group, so it adds none.
    """
    return _homology(magma, n, nus, coeff, force, "plain")


def _homology(structure, n, nus, coeff, force, kind):
    if n < 0:
        raise MagmaError("homology degree must be >= 0")
    q = structure.order
    dim_n = q ** (2**n)
    lower = _differential(structure, n, nus, kind, force)
    upper = _differential(structure, n + 1, nus, kind, force)
    if kind == "plain":
        _check_chain_pair(lower, upper, q, n)
    if coeff:
        r_low = rank_mod_p(lower, coeff) if lower is not None else 0
        r_up = rank_mod_p(upper, coeff)
        return HomologyResult(dim_n - r_low - r_up, coeff=coeff)
    r_low = rank(lower) if lower is not None else 0
    snf = _image_smith(structure, n + 1, _nu_key(nus), kind, force)
    factors = snf.invariant_factors()
    return HomologyResult.from_invariants(dim_n - r_low - len(factors), factors)


def homology_class_order(magma: FiniteMagma, n: int, chain: TupleChain, nus=None, force: bool = False):
    """Order of the class of a cycle in ``H_n``; ``INFINITE`` for free directions."""
    return _class_order(magma, n, chain, nus, force, "plain")


def _class_order(structure, n, chain, nus, force, kind):
    q = structure.order
    if chain.level != n:
        raise MagmaError(f"chain is at level {chain.level}, expected {n}")
    lower = _differential(structure, n, nus, kind, force)
    vec = chain_to_vector(chain, q)
    if lower is not None and any(lower.apply(vec)):
        raise MagmaError("chain is not a cycle")
    snf = _image_smith(structure, n + 1, _nu_key(nus), kind, force)
    return order_in_quotient(snf.U.apply(vec), snf.diagonal)


def homology_via_kernel(magma: FiniteMagma, n: int, nus=None) -> HomologyResult:
    """Second route: explicit kernel basis, image expressed in kernel coordinates."""
    from .intlin import kernel_basis

    q = magma.order
    lower = _differential(magma, n, nus, "plain", False)
    upper = _differential(magma, n + 1, nus, "plain", False)
    dim_n = q ** (2**n)
    if lower is None:
        kernel = [[int(i == j) for i in range(dim_n)] for j in range(dim_n)]
    else:
        kernel = kernel_basis(lower)
    image = _distinct_columns(upper).columns()
    return quotient_structure(kernel, image)


# -- families --------------------------------------------------------------------


class IncompatibleFamily(MagmaError):
    pass


def _signed_family(family: MagmaFamily, level: int, alternate: bool) -> MagmaFamily:
    if not alternate or level % 2 == 0:
        return family
    return MagmaFamily(family.members, tuple(-s for s in family.signs))


def hat_homology(family: MagmaFamily, n: int, nus=None, alternate_signs: bool = False, force: bool = False):
    """``Ker(mu_n^tau) / Im(mu_{n+1}^tau hat-delta^nu)``; degree 0 is ``C_0 / Im(mu_1^tau)``.

    With ``alternate_signs`` level ``k`` uses the signs ``(-1)^k tau``.
    """
    from .magma import is_compatible_family
    from .intlin import LatticeError, kernel_basis

    if not is_compatible_family(family):
        raise IncompatibleFamily("incompatible family")
    q = family.order
    dim_n = q ** (2**n)
    lower_family = _signed_family(family, n, alternate_signs)
    upper_family = _signed_family(family, n + 1, alternate_signs)
    if n == 0:
        kernel = [[int(i == j) for i in range(dim_n)] for j in range(dim_n)]
        image = boundary_matrix(upper_family, 1, None, "hat", force)
    else:
        kernel = kernel_basis(boundary_matrix(lower_family, n, None, "hat", force))
        image = boundary_matrix(upper_family, n + 1, nu_for(nus, n + 1), "hat", force)
        if n >= 1:
            col = composite_witness(boundary_matrix(lower_family, n, None, "hat", force), image)
            if col is not None:
                raise LatticeError(
                    f"image not inside kernel at {index_tuple(col, q, 2 ** (n + 1))}"
                )
    return quotient_structure(kernel, _distinct_columns(image).columns())
