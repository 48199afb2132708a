"""Exact integer linear algebra: sparse matrices, Smith normal form, kernels, quotients.

Everything runs on Python ints. The Smith form is computed by sparse
elimination with small-pivot-first selection and Markowitz tie-breaking;
unimodular transforms are tracked only when asked for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

INFINITE = math.inf


@dataclass
class SparseIntMatrix:
    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if v:
                clean[(i, j)] = int(v)
        self.entries = clean

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "SparseIntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v})

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "SparseIntMatrix":
        return cls(rows, len(columns), {(i, j): v for j, col in enumerate(columns) for i, v in enumerate(col) if v})

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> list[int]:
        out = [0] * self.rows
        for (i, jj), v in self.entries.items():
            if jj == j:
                out[i] = v
        return out

    def columns(self) -> list[list[int]]:
        out = [[0] * self.rows for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, dict[int, int]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, {})[j] = v
        out: dict[tuple[int, int], int] = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, {}).items():
                out[(i, j)] = out.get((i, j), 0) + v * w
        return SparseIntMatrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence[int]) -> list[int]:
        out = [0] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def to_text(self) -> str:
        """Debug form: ``r c`` header then ``i j v`` triples (0-based)."""
        lines = [f"{self.rows} {self.cols}"]
        lines += [f"{i} {j} {v}" for (i, j), v in sorted(self.entries.items())]
        return "\n".join(lines)


def determinant(m: SparseIntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_dense()
    n = m.rows
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# -- elimination core ---------------------------------------------------------


def _addmul(target: dict, source: dict, q: int) -> None:
    for key, v in source.items():
        w = target.get(key, 0) + q * v
        if w:
            target[key] = w
        else:
            target.pop(key, None)


class _Eliminator:
    """Row/column dict-of-dicts with optional tracking of U, V and V^-1."""

    def __init__(self, a: SparseIntMatrix, want_u: bool, want_v: bool, want_vinv: bool):
        self.nrows, self.ncols = a.rows, a.cols
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, dict[int, int]] = {}
        for (i, j), v in a.entries.items():
            self.rows.setdefault(i, {})[j] = v
            self.cols.setdefault(j, {})[i] = v
        # U stored by rows, V by columns, V^-1 by rows
        self.u = [{i: 1} for i in range(a.rows)] if want_u else None
        self.v = [{j: 1} for j in range(a.cols)] if want_v else None
        self.vinv = [{j: 1} for j in range(a.cols)] if want_vinv else None

    def add_row(self, dst: int, src: int, q: int) -> None:
        """row_dst += q * row_src"""
        if not q:
            return
        rows, cols = self.rows, self.cols
        dst_row = rows.setdefault(dst, {})
        for j, v in rows[src].items():
            w = dst_row.get(j, 0) + q * v
            if w:
                dst_row[j] = w
                cols.setdefault(j, {})[dst] = w
            else:
                del dst_row[j]
                col = cols[j]
                del col[dst]
                if not col:
                    del cols[j]
        if not dst_row:
            del rows[dst]
        if self.u is not None:
            _addmul(self.u[dst], self.u[src], q)

    def add_col(self, dst: int, src: int, q: int) -> None:
        """col_dst += q * col_src"""
        if not q:
            return
        rows, cols = self.rows, self.cols
        dst_col = cols.setdefault(dst, {})
        for i, v in cols[src].items():
            w = dst_col.get(i, 0) + q * v
            if w:
                dst_col[i] = w
                rows.setdefault(i, {})[dst] = w
            else:
                del dst_col[i]
                row = rows[i]
                del row[dst]
                if not row:
                    del rows[i]
        if not dst_col:
            del cols[dst]
        if self.v is not None:
            _addmul(self.v[dst], self.v[src], q)
        if self.vinv is not None:
            _addmul(self.vinv[src], self.vinv[dst], -q)

    def pick_pivot(self) -> tuple[int, int]:
        best = None
        best_key = None
        rows = self.rows
        for c, col in self.cols.items():
            lc = len(col) - 1
            for r, v in col.items():
                key = (abs(v), lc * (len(rows[r]) - 1))
                if best_key is None or key < best_key:
                    best_key, best = key, (r, c)
                    if key == (1, 0):
                        return best
        return best

    def run(self) -> list[tuple[int, int, int]]:
        pivots = []
        while self.cols:
            r, c = self.pick_pivot()
            while True:
                p = self.cols[c][r]
                for i in [i for i in self.cols[c] if i != r]:
                    self.add_row(i, r, -(self.cols[c][i] // p))
                rest = [i for i in self.cols[c] if i != r]
                if rest:
                    r = min(rest, key=lambda i: abs(self.cols[c][i]))
                    continue
                for j in [j for j in self.rows[r] if j != c]:
                    self.add_col(j, c, -(self.rows[r][j] // p))
                rest = [j for j in self.rows[r] if j != c]
                if rest:
                    c = min(rest, key=lambda j: abs(self.rows[r][j]))
                    continue
                break
            pivots.append((r, c, p))
            del self.rows[r]
            del self.cols[c]
        return pivots


def _to_matrix_rows(dicts: list[dict[int, int]], n: int) -> SparseIntMatrix:
    return SparseIntMatrix(len(dicts), n, {(i, j): v for i, d in enumerate(dicts) for j, v in d.items()})


def _to_matrix_cols(dicts: list[dict[int, int]], n: int) -> SparseIntMatrix:
    return SparseIntMatrix(n, len(dicts), {(i, j): v for j, d in enumerate(dicts) for i, v in d.items()})


@dataclass
class SmithForm:
    """``U * A * V = diag(diagonal)``; ``diagonal`` has min(rows, cols) entries."""

    diagonal: list[int]
    rows: int
    cols: int
    U: SparseIntMatrix | None = None
    V: SparseIntMatrix | None = None
    Vinv: SparseIntMatrix | None = None

    @property
    def D(self) -> SparseIntMatrix:
        return SparseIntMatrix(self.rows, self.cols, {(i, i): d for i, d in enumerate(self.diagonal) if d})

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]


def smith_normal_form(
    a: SparseIntMatrix, *, want_u: bool = True, want_v: bool = True, want_vinv: bool = False
) -> SmithForm:
    """Smith normal form with optional unimodular transforms.

    The diagonal is canonical: nonnegative, nonzero entries first, each
    dividing the next.
    """
    el = _Eliminator(a, want_u, want_v, want_vinv)
    pivots = el.run()
    # reorder so pivot k sits at (k, k)
    row_order = [r for r, _, _ in pivots]
    col_order = [c for _, c, _ in pivots]
    used_r, used_c = set(row_order), set(col_order)
    row_order += [i for i in range(a.rows) if i not in used_r]
    col_order += [j for j in range(a.cols) if j not in used_c]
    diag = [p for _, _, p in pivots]
    u = [el.u[i] for i in row_order] if el.u is not None else None
    v = [el.v[j] for j in col_order] if el.v is not None else None
    vinv = [el.vinv[j] for j in col_order] if el.vinv is not None else None

    for k, d in enumerate(diag):
        if d < 0:
            diag[k] = -d
            if u is not None:
                u[k] = {key: -val for key, val in u[k].items()}

    # gcd/lcm sweep into a divisibility chain
    rank = len(diag)
    for i in range(rank):
        for j in range(i + 1, rank):
            x, y = diag[i], diag[j]
            if y % x == 0:
                continue
            g, s, t = _xgcd(x, y)
            # rows (i, j) <- [[s, t], [-y/g, x/g]] after col_i += col_j
            if v is not None:
                _addmul(v[i], v[j], 1)
            if vinv is not None:
                _addmul(vinv[j], vinv[i], -1)
            if u is not None:
                ui, uj = u[i], u[j]
                new_i: dict[int, int] = {}
                _addmul(new_i, ui, s)
                _addmul(new_i, uj, t)
                new_j: dict[int, int] = {}
                _addmul(new_j, ui, -(y // g))
                _addmul(new_j, uj, x // g)
                u[i], u[j] = new_i, new_j
            q = t * y // g
            if v is not None:
                _addmul(v[j], v[i], -q)
            if vinv is not None:
                _addmul(vinv[i], vinv[j], q)
            diag[i], diag[j] = g, x * y // g

    full_diag = diag + [0] * (min(a.rows, a.cols) - rank)
    return SmithForm(
        full_diag,
        a.rows,
        a.cols,
        U=_to_matrix_rows(u, a.rows) if u is not None else None,
        V=_to_matrix_cols(v, a.cols) if v is not None else None,
        Vinv=_to_matrix_rows(vinv, a.cols) if vinv is not None else None,
    )


def _xgcd(x: int, y: int) -> tuple[int, int, int]:
    """``g = s*x + t*y`` with ``g = gcd(x, y) > 0``."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def invariant_factors(a: SparseIntMatrix) -> list[int]:
    return smith_normal_form(a, want_u=False, want_v=False).invariant_factors()


def rank(a: SparseIntMatrix) -> int:
    return len(_Eliminator(a, False, False, False).run())


def rank_mod_p(a: SparseIntMatrix, p: int) -> int:
    """Rank over F_p (p prime) by sparse Gaussian elimination."""
    rows: dict[int, dict[int, int]] = {}
    for (i, j), v in a.entries.items():
        v %= p
        if v:
            rows.setdefault(i, {})[j] = v
    pivots: dict[int, dict[int, int]] = {}
    r = 0
    for row in rows.values():
        row = dict(row)
        while row:
            lead = min(row)
            if lead not in pivots:
                inv = pow(row[lead], -1, p)
                pivots[lead] = {j: v * inv % p for j, v in row.items()}
                r += 1
                break
            q = row[lead]
            for j, v in pivots[lead].items():
                w = (row.get(j, 0) - q * v) % p
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
    return r


def kernel_basis(a: SparseIntMatrix) -> list[list[int]]:
    """Basis of the integer null space (a saturated lattice)."""
    snf = smith_normal_form(a, want_u=False, want_v=True)
    v = snf.V.columns()
    return [v[j] for j in range(snf.rank, a.cols)]


# -- quotients of lattices ----------------------------------------------------


@dataclass(frozen=True)
class HomologyResult:
    """A finitely generated abelian group ``Z^betti (+) Z_d1 (+) ...``.

    With ``coeff = p > 0`` the group is a vector space over F_p and
    ``betti`` is its dimension.
    """

    betti: int
    torsion: tuple[int, ...] = ()
    coeff: int = 0

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion must form a divisibility chain")

    @classmethod
    def from_invariants(cls, free_rank: int, factors: Iterable[int]) -> "HomologyResult":
        return cls(free_rank, tuple(sorted(d for d in factors if d > 1)))

    def __str__(self) -> str:
        if self.coeff:
            return "0" if self.betti == 0 else f"(Z_{self.coeff})^{self.betti}"
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z_{d}" for d in self.torsion]
        return " (+) ".join(parts) if parts else "0"


class LatticeError(ValueError):
    pass


def solve_integer(a: SparseIntMatrix, b: Sequence[int], snf: SmithForm | None = None) -> list[int] | None:
    """Some integer ``x`` with ``a x = b``, or None when no integer solution exists."""
    if snf is None:
        snf = smith_normal_form(a)
    ub = snf.U.apply(b)
    y = [0] * a.cols
    for i, val in enumerate(ub):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if d == 0:
            if val:
                return None
        elif val % d:
            return None
        else:
            y[i] = val // d
    return snf.V.apply(y)


def _coordinates(kernel: Sequence[Sequence[int]], vectors: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    k_mat = SparseIntMatrix.from_columns(kernel, dim)
    snf = smith_normal_form(k_mat)
    if snf.rank != len(kernel):
        raise LatticeError("kernel basis vectors are linearly dependent")
    out = []
    for vec in vectors:
        y = solve_integer(k_mat, vec, snf)
        if y is None:
            raise LatticeError("image not inside kernel")
        out.append(y)
    return out


def _dimension(kernel, vectors) -> int:
    for v in list(kernel) + list(vectors):
        return len(v)
    return 0


def quotient_structure(kernel: Sequence[Sequence[int]], image: Sequence[Sequence[int]]) -> HomologyResult:
    """Structure of ``span(kernel) / span(image)``; image must lie inside the kernel lattice."""
    k = len(kernel)
    if k == 0:
        if any(any(v) for v in image):
            raise LatticeError("image not inside kernel")
        return HomologyResult(0)
    coords = _coordinates(kernel, image, _dimension(kernel, image))
    if not coords:
        return HomologyResult(k)
    factors = invariant_factors(SparseIntMatrix.from_columns(coords, k))
    return HomologyResult.from_invariants(k - len(factors), factors)


def order_in_quotient(ub: Sequence[int], diagonal: Sequence[int]) -> int | float:
    """Order of a class given ``U v`` and the Smith diagonal of the image matrix."""
    order = 1
    for i, val in enumerate(ub):
        if not val:
            continue
        d = diagonal[i] if i < len(diagonal) else 0
        if d == 0:
            return INFINITE
        order = math.lcm(order, d // math.gcd(d, val))
    return order


def class_order(v: Sequence[int], kernel: Sequence[Sequence[int]], image: Sequence[Sequence[int]]) -> int | float:
    """Least m >= 1 with ``m v`` in the image lattice, or ``INFINITE``."""
    k = len(kernel)
    dim = _dimension(kernel, list(image) + [v])
    coords = _coordinates(kernel, list(image) + [v], dim)
    yv = coords.pop()
    img = SparseIntMatrix.from_columns(coords, k) if coords else SparseIntMatrix(k, 0)
    snf = smith_normal_form(img, want_v=False)
    return order_in_quotient(snf.U.apply(yv), snf.diagonal)
