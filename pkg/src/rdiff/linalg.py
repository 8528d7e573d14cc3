"""Dense exact linear algebra over GF(2^m).

Vectors are plain tuples of element codes, matrices are immutable :class:`Mat`
values.  Column-vector convention throughout: ``M`` acts on the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CauchyCollision,
    DimensionMismatch,
    FieldMismatch,
    IndexOutOfRange,
    MalformedInput,
    NonSquare,
    Singular,
    TooLarge,
)
from .gf import Field, from_hex, get_field, to_hex

Vec = tuple  # tuple[int, ...]
IndexSet = tuple  # sorted tuple of distinct 0-based indices

BRANCH_BUDGET_BITS = 24


@dataclass(frozen=True)
class Mat:
    field: Field
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in r) for r in self.rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        q = self.field.order
        for r in rows:
            for a in r:
                if not 0 <= a < q:
                    raise MalformedInput(f"entry {a} is not an element of {self.field}")
        object.__setattr__(self, "rows", rows)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> Vec:
        return self.rows[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{a:>{len(hex(self.field.mask))}x}" for a in r) for r in self.rows)


def _require_square(M: Mat) -> int:
    if not M.is_square:
        raise NonSquare(f"expected a square matrix, got {M.n_rows}x{M.n_cols}")
    return M.n_rows


def _same_field(a: Field, b: Field) -> None:
    if a != b:
        raise FieldMismatch(f"{a} and {b} differ")


# -- vectors


def weight(x: Sequence[int]) -> int:
    return sum(1 for a in x if a)


def support(x: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, a in enumerate(x) if a)


def vec_add(x: Sequence[int], y: Sequence[int]) -> Vec:
    if len(x) != len(y):
        raise DimensionMismatch("vector lengths differ")
    return tuple(a ^ b for a, b in zip(x, y))


def vec_scale(field: Field, c: int, x: Sequence[int]) -> Vec:
    return tuple(field.mul(c, a) for a in x)


def normalize(field: Field, x: Sequence[int]) -> Vec:
    """Scale ``x`` so its first nonzero coordinate is 1."""
    for a in x:
        if a:
            return vec_scale(field, field.inv(a), x)
    return tuple(x)


def unit(n: int, i: int, value: int = 1) -> Vec:
    return tuple(value if k == i else 0 for k in range(n))


# -- constructors


def identity(field: Field, n: int) -> Mat:
    return Mat(field, tuple(unit(n, i) for i in range(n)))


def zeros(field: Field, n_rows: int, n_cols: int | None = None) -> Mat:
    n_cols = n_rows if n_cols is None else n_cols
    return Mat(field, tuple((0,) * n_cols for _ in range(n_rows)))


def diag(field: Field, entries: Sequence[int]) -> Mat:
    n = len(entries)
    return Mat(field, tuple(unit(n, i, entries[i]) for i in range(n)))


def permutation_matrix(field: Field, perm: Sequence[int]) -> Mat:
    """Matrix ``P`` with ``P[i][perm[i]] = 1``, so ``(P x)_i = x_{perm[i]}``."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise MalformedInput(f"{list(perm)} is not a permutation of range({n})")
    return Mat(field, tuple(unit(n, perm[i]) for i in range(n)))


def circulant(field: Field, first_row: Sequence[int]) -> Mat:
    """Each row is the previous one rotated one place to the right."""
    n = len(first_row)
    return Mat(field, tuple(tuple(first_row[(j - i) % n] for j in range(n)) for i in range(n)))


def left_circulant(field: Field, first_row: Sequence[int]) -> Mat:
    """Each row is the previous one rotated one place to the left; always symmetric."""
    n = len(first_row)
    return Mat(field, tuple(tuple(first_row[(j + i) % n] for j in range(n)) for i in range(n)))


def cauchy(field: Field, xs: Sequence[int], ys: Sequence[int]) -> Mat:
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise CauchyCollision("Cauchy parameters must be pairwise distinct")
    rows = []
    for x in xs:
        row = []
        for y in ys:
            if x == y:
                raise CauchyCollision(f"x + y = 0 for x = y = {to_hex(x)}")
            row.append(field.inv(x ^ y))
        rows.append(tuple(row))
    return Mat(field, tuple(rows))


def cauchy_type2(field: Field, xs: Sequence[int], l: int) -> Mat:
    """Cauchy matrix with ``y_i = l + x_i``; symmetric."""
    if l == 0:
        raise CauchyCollision("l must be nonzero")
    return cauchy(field, xs, [l ^ x for x in xs])


def hadamard(field: Field, seed: Sequence[int]) -> Mat:
    n = len(seed)
    if n == 0 or n & (n - 1):
        raise DimensionMismatch(f"Hadamard seed length must be a power of two, got {n}")
    return Mat(field, tuple(tuple(seed[i ^ j] for j in range(n)) for i in range(n)))


# -- basic operations


def transpose(M: Mat) -> Mat:
    return Mat(M.field, tuple(zip(*M.rows)) if M.rows else ())


def mat_vec_mul(M: Mat, x: Sequence[int]) -> Vec:
    if len(x) != M.n_cols:
        raise DimensionMismatch(f"matrix has {M.n_cols} columns, vector has length {len(x)}")
    f = M.field
    if f.exp is None:
        out = []
        for r in M.rows:
            acc = 0
            for a, b in zip(r, x):
                acc ^= f.mul_slow(a, b)
            out.append(acc)
        return tuple(out)
    exp, log = f.exp, f.log
    nz = [(j, log[b]) for j, b in enumerate(x) if b]
    out = []
    for r in M.rows:
        acc = 0
        for j, lb in nz:
            a = r[j]
            if a:
                acc ^= exp[log[a] + lb]
        out.append(acc)
    return tuple(out)


def mat_mul(A: Mat, B: Mat) -> Mat:
    _same_field(A.field, B.field)
    if A.n_cols != B.n_rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    cols = [mat_vec_mul(A, B.col(j)) for j in range(B.n_cols)]
    return Mat(A.field, tuple(zip(*cols)) if cols else tuple(() for _ in range(A.n_rows)))


def submatrix(M: Mat, I: Iterable[int], J: Iterable[int]) -> Mat:
    I = sorted(I)
    J = sorted(J)
    for idx, bound in ((I, M.n_rows), (J, M.n_cols)):
        if len(set(idx)) != len(idx) or any(not 0 <= k < bound for k in idx):
            raise IndexOutOfRange(f"invalid index set {idx} for dimension {bound}")
    return Mat(M.field, tuple(tuple(M.rows[i][j] for j in J) for i in I))


def complement(I: Iterable[int], n: int) -> IndexSet:
    s = set(I)
    return tuple(k for k in range(n) if k not in s)


def is_symmetric(M: Mat) -> bool:
    return M.is_square and all(
        M.rows[i][j] == M.rows[j][i] for i in range(M.n_rows) for j in range(i)
    )


def is_circulant(M: Mat) -> bool:
    if not M.is_square:
        return False
    n = M.n_rows
    r0 = M.rows[0] if n else ()
    return all(M.rows[i][j] == r0[(j - i) % n] for i in range(n) for j in range(n))


def is_diagonal(M: Mat) -> bool:
    return M.is_square and all(
        M.rows[i][j] == 0 for i in range(M.n_rows) for j in range(M.n_cols) if i != j
    )


def permutation_of(M: Mat) -> list[int] | None:
    """The ``perm`` with ``M = permutation_matrix(perm)``, or None."""
    if not M.is_square:
        return None
    perm = []
    for r in M.rows:
        if sorted(r) != [0] * (len(r) - 1) + [1]:
            return None
        perm.append(r.index(1))
    if sorted(perm) != list(range(len(perm))):
        return None
    return perm


# -- elimination


def _rref(field: Field, rows: list[list[int]], n_cols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    mul, inv = field.mul, field.inv
    pivots = []
    r = 0
    n_rows = len(rows)
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        s = inv(pr[c])
        if s != 1:
            pr[:] = [mul(s, a) for a in pr]
        for i in range(n_rows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [a ^ mul(f, b) for a, b in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def _det_rows(field: Field, rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    mul = field.mul
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return mul(a, d) ^ mul(b, c)
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        # char 2: the determinant equals the permanent
        return (
            mul(a, mul(e, i) ^ mul(f, h))
            ^ mul(b, mul(d, i) ^ mul(f, g))
            ^ mul(c, mul(d, h) ^ mul(e, g))
        )
    inv = field.inv
    a = [list(r) for r in rows]
    det = 1
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return 0
        a[c], a[p] = a[p], a[c]
        pivot = a[c][c]
        det = mul(det, pivot)
        s = inv(pivot)
        pr = a[c]
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                g = mul(f, s)
                a[i] = [x ^ mul(g, y) for x, y in zip(a[i], pr)]
    return det


def determinant(M: Mat) -> int:
    _require_square(M)
    return _det_rows(M.field, M.rows)


def rank(M: Mat) -> int:
    _, pivots = _rref(M.field, [list(r) for r in M.rows], M.n_cols)
    return len(pivots)


def nullspace_basis(M: Mat) -> list[Vec]:
    """Kernel basis; basis vector k sets the k-th free column to 1 and the other free columns to 0."""
    n = M.n_cols
    rows, pivots = _rref(M.field, [list(r) for r in M.rows], n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        x = [0] * n
        x[free] = 1
        for r, c in enumerate(pivots):
            x[c] = rows[r][free]  # char 2: -a = a
        basis.append(tuple(x))
    return basis


def solve_homogeneous(M: Mat) -> Vec | None:
    basis = nullspace_basis(M)
    return basis[0] if basis else None


def solve_linear(M: Mat, b: Sequence[int]) -> tuple[Vec, list[Vec]] | None:
    """All solutions of ``M x = b`` as (particular solution, kernel basis), or None."""
    if len(b) != M.n_rows:
        raise DimensionMismatch("right-hand side length does not match the row count")
    n = M.n_cols
    aug = [list(r) + [bi] for r, bi in zip(M.rows, b)]
    rows, pivots = _rref(M.field, aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [0] * n
    for r, c in enumerate(pivots):
        x[c] = rows[r][n]
    return tuple(x), nullspace_basis(M)


def inverse(M: Mat) -> Mat:
    n = _require_square(M)
    aug = [list(r) + list(unit(n, i)) for i, r in enumerate(M.rows)]
    rows, pivots = _rref(M.field, aug, n)
    if pivots != list(range(n)):
        raise Singular("matrix is not invertible")
    return Mat(M.field, tuple(tuple(r[n:]) for r in rows))


# -- MDS and branch numbers


def singular_minor(M: Mat) -> tuple[IndexSet, IndexSet] | None:
    """First singular square submatrix ``(I, J)`` by increasing order, or None.

    Within one order, row sets vary slowest and both run in lexicographic order.
    """
    n = _require_square(M)
    rows = M.rows
    for i in range(n):
        for j in range(n):
            if rows[i][j] == 0:
                return (i,), (j,)
    f = M.field
    for r in range(2, n + 1):
        col_sets = list(combinations(range(n), r))
        for I in combinations(range(n), r):
            sub_rows = [rows[i] for i in I]
            for J in col_sets:
                if _det_rows(f, [[row[j] for j in J] for row in sub_rows]) == 0:
                    return I, J
    return None


def is_mds(M: Mat) -> bool:
    return singular_minor(M) is None


def image_tables(M: Mat) -> np.ndarray:
    """``T[j, e]`` = packed ``M (e * e_j)``; coordinate ``i`` occupies bits ``[m*i, m*i + m)``."""
    f = M.field
    m, q = f.m, f.order
    e = np.arange(q, dtype=np.int64)
    T = np.zeros((M.n_cols, q), dtype=np.int64)
    for j in range(M.n_cols):
        for i in range(M.n_rows):
            T[j] ^= f.vmul(M.rows[i][j], e) << (m * i)
    return T


def packed_weight(packed: np.ndarray, n: int, m: int) -> np.ndarray:
    mask = (1 << m) - 1
    w = np.zeros(packed.shape, dtype=np.int64)
    for i in range(n):
        w += ((packed >> (m * i)) & mask) != 0
    return w


def pack(x: Sequence[int], m: int) -> int:
    out = 0
    for i, a in enumerate(x):
        out |= a << (m * i)
    return out


def unpack(p: int, n: int, m: int) -> Vec:
    mask = (1 << m) - 1
    return tuple((p >> (m * i)) & mask for i in range(n))


def _branch_number(M: Mat) -> int:
    n = _require_square(M)
    f = M.field
    m, q = f.m, f.order
    if n * m > BRANCH_BUDGET_BITS:
        raise TooLarge(f"branch number needs n*m <= {BRANCH_BUDGET_BITS}, got {n * m}")
    T = image_tables(M)
    nz = (np.arange(q) != 0).astype(np.int64)
    best = 2 * n
    for p in range(n):
        # x = e_p + anything on coordinates p+1..n-1
        img = T[p, 1:2].copy()
        w_in = np.ones(1, dtype=np.int64)
        for j in range(p + 1, n):
            img = (img[:, None] ^ T[j][None, :]).ravel()
            w_in = (w_in[:, None] + nz[None, :]).ravel()
        best = min(best, int((w_in + packed_weight(img, n, m)).min()))
    return best


def branch_number_differential(M: Mat) -> int:
    """min over nonzero x of wt(x) + wt(Mx), exhaustive over scalar-normalised x."""
    return _branch_number(M)


def branch_number_linear(M: Mat) -> int:
    return _branch_number(transpose(M))


# -- JSON formats


def matrix_to_json(M: Mat) -> dict:
    return {
        "m": M.field.m,
        "modulus": to_hex(M.field.modulus),
        "rows": [[to_hex(a) for a in r] for r in M.rows],
    }


def _field_from_json(d: dict) -> Field:
    try:
        m = int(d["m"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput("missing or invalid field degree 'm'") from exc
    modulus = d.get("modulus")
    try:
        return get_field(m, None if modulus is None else from_hex(modulus))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def _elements(field: Field, items) -> tuple[int, ...]:
    try:
        out = tuple(from_hex(a) for a in items)
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"bad element list {items!r}") from exc
    for a in out:
        if not field.contains(a):
            raise MalformedInput(f"{to_hex(a)} is not an element of {field}")
    return out


def matrix_from_json(d: dict) -> Mat:
    field = _field_from_json(d)
    if "rows" not in d or not isinstance(d["rows"], list):
        raise MalformedInput("matrix file needs a 'rows' list")
    return Mat(field, tuple(_elements(field, r) for r in d["rows"]))


def vector_to_json(field: Field, x: Sequence[int]) -> dict:
    return {"m": field.m, "modulus": to_hex(field.modulus), "entries": [to_hex(a) for a in x]}


def vector_from_json(d: dict) -> tuple[Field, Vec]:
    field = _field_from_json(d)
    if "entries" not in d:
        raise MalformedInput("vector file needs an 'entries' list")
    return field, _elements(field, d["entries"])
