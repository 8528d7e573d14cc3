"""Related differences, related differentials, witnesses and the two search oracles."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    MalformedInput,
    NotMDS,
    NotPermutation,
    SingularDiagonal,
    TooLarge,
)
from .gf import Field, from_hex, get_field, to_hex
from .linalg import (
    Mat,
    Vec,
    complement,
    image_tables,
    inverse,
    is_diagonal,
    mat_vec_mul,
    normalize,
    nullspace_basis,
    permutation_of,
    singular_minor,
    submatrix,
    unpack,
    vec_add,
    weight,
)

FULL_BUDGET_BITS = 20
BOUNDED_MAX_N = 6
BOUNDED_MAX_M = 8
_CHUNK = 1 << 22


class Method(str, enum.Enum):
    SEARCH_FULL = "search-full"
    SEARCH_BOUNDED = "search-bounded"
    THM_NON_MDS = "thm-non-mds"
    THM_SYMMETRIC_ODD = "thm-symmetric-odd"
    CIRC_MOD4 = "circ-mod4"
    CIRC_MOD3 = "circ-mod3"
    CIRC_ODD = "circ-odd"
    CHAR_3X3 = "char-3x3"
    TRANSFORMED = "transformed"


@dataclass
class Witness:
    """A candidate related-differential pair ``(u, v)`` and where it came from."""

    u: Vec
    v: Vec
    method: Method
    verified: bool = False
    trace: list = dc_field(default_factory=list)

    def __post_init__(self):
        self.u = tuple(self.u)
        self.v = tuple(self.v)
        self.method = Method(self.method)

    @property
    def t(self) -> Vec:
        return vec_add(self.u, self.v)

    def to_json(self, field: Field) -> dict:
        return {
            "m": field.m,
            "modulus": to_hex(field.modulus),
            "n": len(self.u),
            "u": [to_hex(a) for a in self.u],
            "v": [to_hex(a) for a in self.v],
            "method": self.method.value,
        }

    @classmethod
    def from_json(cls, d: dict) -> tuple[Field, "Witness"]:
        try:
            fld = get_field(int(d["m"]), from_hex(d["modulus"]) if "modulus" in d else None)
            u = tuple(from_hex(a) for a in d["u"])
            v = tuple(from_hex(a) for a in d["v"])
            method = Method(d.get("method", Method.TRANSFORMED.value))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad witness file: {exc}") from exc
        if "n" in d and not len(u) == len(v) == int(d["n"]):
            raise MalformedInput("witness vector lengths disagree with 'n'")
        if any(not fld.contains(a) for a in u + v):
            raise MalformedInput("witness entry outside the field")
        return fld, cls(u, v, method)


@dataclass(frozen=True)
class RelatedTriplet:
    u: Vec
    v: Vec
    t: Vec

    @classmethod
    def from_pair(cls, u: Sequence[int], v: Sequence[int]) -> "RelatedTriplet":
        if not is_related_differences(u, v):
            raise ValueError("u and v are not related differences")
        return cls(tuple(u), tuple(v), vec_add(u, v))

    @property
    def weights(self) -> tuple[int, int, int]:
        return weight(self.u), weight(self.v), weight(self.t)


# -- predicates


def is_related_differences(u: Sequence[int], v: Sequence[int]) -> bool:
    if len(u) != len(v):
        raise DimensionMismatch("vectors have different lengths")
    return all(a == 0 or b == 0 or a == b for a, b in zip(u, v))


def is_related_differential_pair(M: Mat, u: Sequence[int], v: Sequence[int]) -> bool:
    if not M.is_square or len(u) != M.n_cols or len(v) != M.n_cols:
        raise DimensionMismatch("matrix and vectors do not agree in size")
    return is_related_differences(u, v) and is_related_differences(
        mat_vec_mul(M, u), mat_vec_mul(M, v)
    )


def witness_failure(M: Mat, w: Witness) -> str | None:
    """Reason code why ``w`` is not a valid nontrivial witness for ``M``, or None."""
    n = M.n_cols
    if not M.is_square or len(w.u) != n or len(w.v) != n:
        return "dimension"
    if not any(w.u) or not any(w.v):
        return "zero-vector"
    if w.u == w.v:
        return "trivial"
    if not is_related_differences(w.u, w.v):
        return "inputs-unrelated"
    if not is_related_differences(mat_vec_mul(M, w.u), mat_vec_mul(M, w.v)):
        return "outputs-unrelated"
    return None


def verify_witness(M: Mat, w: Witness) -> bool:
    w.verified = witness_failure(M, w) is None
    return w.verified


def _verified(M: Mat, u, v, method: Method, trace=()) -> Witness | None:
    w = Witness(u, v, method, trace=list(trace))
    return w if verify_witness(M, w) else None


# -- bounded search (MDS only)


def colex_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), k), key=lambda c: c[::-1])


def _projective_coefficients(field: Field, k: int):
    """Nonzero coefficient vectors of length k whose first nonzero entry is 1."""
    q = field.order
    for lead in range(k):
        for rest in product(range(q), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + rest


def bounded_inputs(M: Mat, bound: int):
    """Scalar-normalised ``x`` with ``wt(x) + wt(Mx) <= bound``, each once, with ``Mx``.

    Candidates come from prescribing zeros of ``Mx`` and solving for ``x``
    rather than scanning the whole space.
    """
    n = M.n_cols
    f = M.field
    extra = bound - n
    seen = set()
    for s in range(1, n + 1):
        for S in colex_subsets(n, s):
            if s <= extra:
                # any x supported on S qualifies
                for tail in product(f.nonzero(), repeat=s - 1):
                    x = [0] * n
                    x[S[0]] = 1
                    for k, a in zip(S[1:], tail):
                        x[k] = a
                    x = tuple(x)
                    if x not in seen:
                        seen.add(x)
                        X = mat_vec_mul(M, x)
                        if s + weight(X) <= bound:
                            yield x, X
                continue
            r = s - max(extra, 0)
            if r >= s:
                continue
            for R in colex_subsets(n, r):
                basis = nullspace_basis(submatrix(M, R, S))
                if not basis:
                    continue
                for coeffs in _projective_coefficients(f, len(basis)):
                    xs = [0] * s
                    for c, b in zip(coeffs, basis):
                        if c:
                            xs = [a ^ f.mul(c, bb) for a, bb in zip(xs, b)]
                    if not all(xs):
                        continue
                    x = [0] * n
                    for k, a in zip(S, xs):
                        x[k] = a
                    x = normalize(f, x)
                    if x in seen:
                        continue
                    seen.add(x)
                    X = mat_vec_mul(M, x)
                    if s + weight(X) <= bound:
                        yield x, X


def _partner(M: Mat, x: Vec, X: Vec) -> Vec | None:
    """A nontrivial y with (x, y) and (Mx, My) related, for MDS ``M``.

    ``c = (y, My)`` ranges over the code ``{(y, My)}``; on the support P of
    ``(x, Mx)`` every coordinate of c must be 0 or equal ``(x, Mx)``, elsewhere
    it is free.  The first n positions T of P form an information set (M is
    MDS and |P| >= n + 1), so c is the subset sum over T of the scaled
    systematic generators, checked on the remaining positions of P.
    """
    n = M.n_cols
    f = M.field
    full = list(x) + list(X)
    P = [p for p in range(2 * n) if full[p]]
    if len(P) <= n:
        raise NotMDS("differential weight below the MDS branch number")
    T = P[:n]
    check = P[n:]
    T_in = [t for t in T if t < n]
    T_out = [t - n for t in T if t >= n]
    rest = complement(T_in, n)
    Kinv = inverse(submatrix(M, T_out, rest)) if T_out else None

    gens = []
    for t in T:
        y = [0] * n
        if t < n:
            y[t] = 1
            if Kinv is not None:
                rhs = [M.rows[i][t] for i in T_out]
                for k, val in zip(rest, mat_vec_mul(Kinv, rhs)):
                    y[k] = val
        else:
            o = T_out.index(t - n)
            for k, val in zip(rest, Kinv.col(o)):
                y[k] = val
        c = y + list(mat_vec_mul(M, y))
        s = full[t]
        gens.append([f.mul(s, a) for a in c])

    # (c, (x, Mx) - c) are both solutions; fix T[0] outside the subset
    cur = [0] * (2 * n)
    for k in range(1, 1 << (n - 1)):
        bit = (k & -k).bit_length()
        cur = [a ^ b for a, b in zip(cur, gens[bit])]
        if all(cur[p] == 0 or cur[p] == full[p] for p in check):
            return tuple(cur[:n])
    return None


def search_bounded(M: Mat, *, max_n: int = BOUNDED_MAX_N, max_m: int = BOUNDED_MAX_M) -> Witness | None:
    """Complete related-differential search for MDS matrices.

    Every related triplet of an MDS map has a member whose differential weight
    is at most ``n + n // 3``; all such members are enumerated and their
    partners solved for.  None means the matrix admits no related differential.
    """
    if not M.is_square:
        raise DimensionMismatch("search needs a square matrix")
    n, m = M.n_rows, M.field.m
    if n > max_n or m > max_m:
        raise TooLarge(f"bounded search budget is n <= {max_n}, m <= {max_m}; got n={n}, m={m}")
    if singular_minor(M) is not None:
        raise NotMDS("bounded search needs an MDS matrix")
    for x, X in bounded_inputs(M, n + n // 3):
        y = _partner(M, x, X)
        if y is not None:
            w = _verified(M, x, y, Method.SEARCH_BOUNDED)
            if w is None:
                raise AssertionError(f"bounded search produced an invalid pair {x}, {y}")
            return w
    return None


# -- full search (no assumptions on M)


def search_full(M: Mat, *, budget_bits: int = FULL_BUDGET_BITS) -> Witness | None:
    """Exhaustive search over scalar-normalised u and pattern-compatible v.

    Supports of u are visited in colex order (ascending bitmask), u in
    ascending code within a support, and the smallest valid v is returned.
    """
    if not M.is_square:
        raise DimensionMismatch("search needs a square matrix")
    n = M.n_rows
    f = M.field
    m, q = f.m, f.order
    if n * m > budget_bits:
        raise TooLarge(f"full search needs (2^m)^n <= 2^{budget_bits}, got 2^{n * m}")
    mask = q - 1
    T = image_tables(M)
    idx = np.arange(q**n, dtype=np.int64)
    img = np.zeros_like(idx)
    for j in range(n):
        img ^= T[j][(idx >> (m * j)) & mask]
    elems = np.arange(q, dtype=np.int64)
    nonzero = elems[1:]

    for smask in range(1, 1 << n):
        S = [i for i in range(n) if smask >> i & 1]
        Z = [i for i in range(n) if not smask >> i & 1]
        us = np.array([1 << (m * S[0])], dtype=np.int64)
        for k in S[1:]:
            us = (us[:, None] | (nonzero << (m * k))[None, :]).ravel()
        free = np.zeros(1, dtype=np.int64)
        for z in Z:
            free = (free[:, None] | (elems << (m * z))[None, :]).ravel()
        per_u = (1 << len(S)) * len(free)
        step = max(1, _CHUNK // per_u)
        for lo in range(0, len(us), step):
            u = us[lo : lo + step]
            off = np.zeros((len(u), 1), dtype=np.int64)
            for k in S:
                part = u & (mask << (m * k))
                off = np.concatenate([off, off | part[:, None]], axis=1)
            cand = (off[:, :, None] | free[None, None, :]).reshape(len(u), -1)
            Mu = img[u]
            Mv = img[cand]
            ok = (cand != 0) & (cand != u[:, None])
            for i in range(n):
                a = ((Mu >> (m * i)) & mask)[:, None]
                b = (Mv >> (m * i)) & mask
                ok &= (a == 0) | (b == 0) | (a == b)
            hit = ok.any(axis=1)
            if hit.any():
                r = int(np.argmax(hit))
                v = int(cand[r][ok[r]].min())
                w = _verified(M, unpack(int(u[r]), n, m), unpack(v, n, m), Method.SEARCH_FULL)
                if w is None:
                    raise AssertionError("full search produced an invalid pair")
                return w
    return None


# -- witness transforms


def _diag_entries(D: Mat) -> list[int]:
    if not is_diagonal(D):
        raise SingularDiagonal("expected a diagonal matrix")
    d = [D.rows[i][i] for i in range(D.n_rows)]
    if not all(d):
        raise SingularDiagonal("diagonal matrix has a zero entry")
    return d


def transform_witness_diag(w: Witness, D1: Mat, D2: Mat) -> Witness:
    """Witness for ``D1 M D2`` from a witness for ``M``: ``(D2^-1 u, D2^-1 v)``."""
    _diag_entries(D1)
    f = D2.field
    d = [f.inv(a) for a in _diag_entries(D2)]
    if len(d) != len(w.u):
        raise DimensionMismatch("diagonal size does not match the witness")
    u = tuple(f.mul(a, b) for a, b in zip(d, w.u))
    v = tuple(f.mul(a, b) for a, b in zip(d, w.v))
    return Witness(u, v, Method.TRANSFORMED, trace=w.trace + [f"diag from {w.method.value}"])


def transform_witness_perm(w: Witness, P: Mat, Q: Mat) -> Witness:
    """Witness for ``P M Q`` from a witness for ``M``: ``(Q^-1 u, Q^-1 v)``."""
    if permutation_of(P) is None:
        raise NotPermutation("P is not a permutation matrix")
    perm = permutation_of(Q)
    if perm is None:
        raise NotPermutation("Q is not a permutation matrix")
    if len(perm) != len(w.u):
        raise DimensionMismatch("permutation size does not match the witness")
    n = len(perm)
    u = [0] * n
    v = [0] * n
    # Q^-1 = Q^T and (Q^T x)_{perm[i]} = x_i
    for i, p in enumerate(perm):
        u[p] = w.u[i]
        v[p] = w.v[i]
    return Witness(u, v, Method.TRANSFORMED, trace=w.trace + [f"perm from {w.method.value}"])


def transform_witness_inverse(M: Mat, w: Witness) -> Witness:
    """Witness for ``M^-1`` from a witness for ``M``: ``(Mu, Mv)``."""
    return Witness(
        mat_vec_mul(M, w.u),
        mat_vec_mul(M, w.v),
        Method.TRANSFORMED,
        trace=w.trace + [f"inverse from {w.method.value}"],
    )
