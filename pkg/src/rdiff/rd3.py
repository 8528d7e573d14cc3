"""Complete related-differential decision for 3x3 matrices.

Every matrix with nonzero first row and column factors uniquely as
``D1 M1 D2`` with ``M1`` bordered by ones.  For a 3x3 MDS matrix the inner
entries ``a, b, c, d`` of ``M1`` decide everything: the matrix admits related
differentials iff one of fifteen polynomial identities holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .construct import construct_nonmds_witness
from .core import Method, Witness, transform_witness_diag, verify_witness
from .errors import (
    ConditionNotSatisfied,
    ConstructionDegenerate,
    DimensionMismatch,
    MalformedInput,
    ZeroEntry,
)
from .gf import Field, to_hex
from .linalg import Mat, diag, nullspace_basis, singular_minor, solve_linear, submatrix

CONDITION_LABELS = {
    1: "a+b+c+d=0",
    2: "a+d=0",
    3: "b+c=0",
    4: "ad+bc=a+b",
    5: "ad+bc=a+c",
    6: "ad+bc=b+d",
    7: "ad+bc=c+d",
    8: "ad=a+b+d",
    9: "ad=a+c+d",
    10: "ad=b",
    11: "ad=c",
    12: "bc=a+b+c",
    13: "bc=b+c+d",
    14: "bc=a",
    15: "bc=d",
}

# Weight pattern (1,2,3): u = e_k and M1 t = (M1 u)_p e_p.
_SINGLE_INPUT = {1: (0, 0), 4: (0, 1), 7: (0, 2), 5: (1, 0), 13: (1, 1), 8: (1, 2), 6: (2, 0), 9: (2, 1), 12: (2, 2)}
# Weight pattern (2,2,2): for each row, the column of M1 that is zeroed in the
# singular 3x3 system with u = (x, y, 0), v = (0, y, z).
_ZERO_PLACEMENT = {3: (0, 1, 2), 2: (0, 2, 1), 14: (1, 0, 2), 10: (2, 0, 1), 11: (1, 2, 0), 15: (2, 1, 0)}


def condition_values(field: Field, a: int, b: int, c: int, d: int) -> tuple[int, ...]:
    """The fifteen expressions ``C_i(a, b, c, d)``; a zero value means condition i holds."""
    ad = field.mul(a, d)
    bc = field.mul(b, c)
    s = ad ^ bc
    return (
        a ^ b ^ c ^ d,
        a ^ d,
        b ^ c,
        s ^ a ^ b,
        s ^ a ^ c,
        s ^ b ^ d,
        s ^ c ^ d,
        ad ^ a ^ b ^ d,
        ad ^ a ^ c ^ d,
        ad ^ b,
        ad ^ c,
        bc ^ a ^ b ^ c,
        bc ^ b ^ c ^ d,
        bc ^ a,
        bc ^ d,
    )


def conditions15(field: Field, a: int, b: int, c: int, d: int) -> list[int]:
    return [i for i, val in enumerate(condition_values(field, a, b, c, d), 1) if val == 0]


def condition_matrix(M1: Mat, cid: int) -> Mat:
    """``M1`` with the entries zeroed whose determinant is ``C_cid``."""
    if cid in _SINGLE_INPUT:
        k, p = _SINGLE_INPUT[cid]
        zeros = {(p, k)}
    elif cid in _ZERO_PLACEMENT:
        zeros = {(i, j) for i, j in enumerate(_ZERO_PLACEMENT[cid])}
    else:
        raise ValueError(f"condition id must be in 1..15, got {cid}")
    return Mat(M1.field, tuple(
        tuple(0 if (i, j) in zeros else M1.rows[i][j] for j in range(3)) for i in range(3)
    ))


@dataclass(frozen=True)
class RepDecomposition:
    D1: Mat
    M1: Mat
    D2: Mat

    @property
    def abcd(self) -> tuple[int, int, int, int]:
        if self.M1.n_rows != 3:
            raise DimensionMismatch("(a, b, c, d) is only defined for 3x3 matrices")
        r = self.M1.rows
        return r[1][1], r[1][2], r[2][1], r[2][2]

    def to_json(self) -> dict:
        n = self.M1.n_rows
        out = {
            "D1": [to_hex(self.D1.rows[i][i]) for i in range(n)],
            "M1": [[to_hex(a) for a in r] for r in self.M1.rows],
            "D2": [to_hex(self.D2.rows[i][i]) for i in range(n)],
        }
        if n == 3:
            out["abcd"] = [to_hex(a) for a in self.abcd]
        return out


def decompose(M: Mat) -> RepDecomposition:
    """``M = D1 M1 D2`` with ``D1`` the first column and ``D2 = (1, m11^-1 m12, ...)``."""
    if not M.is_square:
        raise DimensionMismatch("decomposition needs a square matrix")
    f = M.field
    n = M.n_rows
    first_col = M.col(0)
    first_row = M.row(0)
    if not all(first_col) or not all(first_row):
        raise ZeroEntry("first row and first column must be nonzero")
    inv11 = f.inv(first_row[0])
    d2 = [1] + [f.mul(inv11, a) for a in first_row[1:]]
    d1_inv = [f.inv(a) for a in first_col]
    d2_inv = [f.inv(a) for a in d2]
    M1 = Mat(f, tuple(
        tuple(f.mul(f.mul(d1_inv[i], M.rows[i][j]), d2_inv[j]) for j in range(n)) for i in range(n)
    ))
    return RepDecomposition(diag(f, first_col), M1, diag(f, d2))


def _is_representative(M1: Mat) -> bool:
    return M1.shape == (3, 3) and all(a == 1 for a in M1.row(0) + M1.col(0))


def witness_from_condition(M1: Mat, cid: int) -> Witness:
    """Explicit witness for a bordered MDS ``M1`` satisfying condition ``cid``."""
    if not _is_representative(M1):
        raise MalformedInput("expected a 3x3 matrix with all-ones first row and column")
    f = M1.field
    r = M1.rows
    if cid not in conditions15(f, r[1][1], r[1][2], r[2][1], r[2][2]):
        raise ConditionNotSatisfied(f"condition {cid} ({CONDITION_LABELS.get(cid)}) does not hold")
    if cid in _SINGLE_INPUT:
        k, p = _SINGLE_INPUT[cid]
        others = [j for j in range(3) if j != k]
        # M1 t = M1[p][k] e_p with t_k = 1
        rhs = [(M1.rows[p][k] if i == p else 0) ^ M1.rows[i][k] for i in range(3)]
        sol = solve_linear(submatrix(M1, range(3), others), rhs)
        if sol is None:
            raise ConstructionDegenerate(f"condition {cid} holds but its system is inconsistent")
        u = [0, 0, 0]
        u[k] = 1
        v = [0, 0, 0]
        for j, val in zip(others, sol[0]):
            v[j] = val
        label = "weights (1,2,3)"
    else:
        basis = nullspace_basis(condition_matrix(M1, cid))
        if not basis:
            raise ConstructionDegenerate(f"condition {cid} holds but its system is nonsingular")
        x, y, z = basis[0]
        u, v = (x, y, 0), (0, y, z)
        label = "weights (2,2,2)"
    w = Witness(u, v, Method.CHAR_3X3, trace=[f"condition {cid}: {CONDITION_LABELS[cid]}", label])
    if not verify_witness(M1, w):
        raise ConstructionDegenerate(f"witness for condition {cid} failed verification")
    return w


@dataclass
class Rd3Status:
    has_rd: bool
    mds: bool
    conditions: list = dc_field(default_factory=list)
    witness: Witness | None = None
    decomposition: RepDecomposition | None = None

    @property
    def verdict(self) -> str:
        return "has" if self.has_rd else "none"


def rd_status_3x3(M: Mat) -> Rd3Status:
    """Decide related differentials for a 3x3 matrix, with a certificate when present."""
    if M.shape != (3, 3):
        raise DimensionMismatch(f"expected a 3x3 matrix, got {M.n_rows}x{M.n_cols}")
    cert = singular_minor(M)
    if cert is not None:
        return Rd3Status(True, False, witness=construct_nonmds_witness(M, cert))
    dec = decompose(M)
    conds = conditions15(M.field, *dec.abcd)
    if not conds:
        return Rd3Status(False, True, decomposition=dec)
    w1 = witness_from_condition(dec.M1, conds[0])
    w = transform_witness_diag(w1, dec.D1, dec.D2)
    w.method = Method.CHAR_3X3
    if not verify_witness(M, w):
        raise ConstructionDegenerate("transformed 3x3 witness failed verification")
    return Rd3Status(True, True, conds, w, dec)
