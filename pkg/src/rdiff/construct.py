"""Deterministic witness constructions for non-MDS, odd symmetric and circulant matrices."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .core import (
    FULL_BUDGET_BITS,
    Method,
    Witness,
    search_full,
    transform_witness_perm,
    verify_witness,
)
from .errors import (
    ConstructionDegenerate,
    EvenOrder,
    ExcludedOrder,
    IsMDS,
    NonSquare,
    NotCirculant,
    NotMDS,
    NotSymmetric,
)
from .gf import Field
from .linalg import (
    Mat,
    Vec,
    complement,
    determinant,
    identity,
    inverse,
    is_circulant,
    is_symmetric,
    mat_mul,
    mat_vec_mul,
    nullspace_basis,
    permutation_matrix,
    singular_minor,
    solve_homogeneous,
    submatrix,
    unit,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CirculantPoly:
    """``M(X) = sum a_k X^k`` in ``GF(2^m)[X]/(X^n - 1)``; ``a`` is the first column."""

    field: Field
    coeffs: Vec

    @classmethod
    def from_matrix(cls, M: Mat) -> "CirculantPoly":
        if not is_circulant(M):
            raise NotCirculant("matrix is not circulant")
        return cls(M.field, M.col(0))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def mul(self, b: Sequence[int]) -> Vec:
        """Cyclic convolution ``M(X) B(X) mod X^n - 1``."""
        n = self.n
        out = [0] * n
        mul = self.field.mul
        for i, a in enumerate(self.coeffs):
            if a:
                for j, bj in enumerate(b):
                    if bj:
                        out[(i + j) % n] ^= mul(a, bj)
        return tuple(out)

    def residue_part(self, modulus: int, residues: Sequence[int]) -> Vec:
        """Coefficients whose index is in ``residues`` mod ``modulus``; the rest zeroed."""
        return tuple(a if k % modulus in residues else 0 for k, a in enumerate(self.coeffs))


def _embed(n: int, idx: Sequence[int], vals: Sequence[int]) -> list[int]:
    x = [0] * n
    for k, a in zip(idx, vals):
        x[k] = a
    return x


def _square(M: Mat) -> int:
    if not M.is_square:
        raise NonSquare(f"expected a square matrix, got {M.n_rows}x{M.n_cols}")
    return M.n_rows


def _try(M: Mat, u, v, method: Method, trace) -> Witness | None:
    w = Witness(u, v, method, trace=list(trace))
    return w if verify_witness(M, w) else None


def _fallback_search(M: Mat, trace: list) -> Witness | None:
    n, m = M.n_rows, M.field.m
    if n * m > FULL_BUDGET_BITS:
        return None
    w = search_full(M)
    if w is not None:
        w.trace = trace + ["fallback: full search"]
        log.info("constructive path fell back to full search")
    return w


# -- every non-MDS matrix


def _singular_case(M: Mat, trace: list) -> Witness | None:
    """``M`` itself is singular: pair a kernel vector with a sub-vector of it."""
    n = M.n_rows
    s = solve_homogeneous(M)
    if s is None:
        return None
    supp = [i for i, a in enumerate(s) if a]
    if len(supp) >= 2:
        u, v = s, unit(n, supp[0], s[supp[0]])
    else:
        j = supp[0]
        k = next(k for k in range(n) if k != j)
        u = unit(n, j)
        v = tuple(1 if i in (j, k) else 0 for i in range(n))
    return _try(M, u, v, Method.THM_NON_MDS, trace + ["singular matrix case"])


def construct_nonmds_witness(M: Mat, certificate=None) -> Witness:
    """Witness from a singular square submatrix ``M[I;J]``.

    Case 1, ``M[I^c;J^c]`` singular: kernel vectors of both blocks give inputs
    with disjoint supports whose images vanish on complementary row sets.
    Case 2, ``M[I^c;J^c]`` nonsingular: the kernel of the ``(n-r) x (n-r+1)``
    system equating the two images on ``I^c`` fixes ``v`` and the scale of ``u``.
    """
    n = _square(M)
    if n < 2:
        raise ConstructionDegenerate("a 1x1 matrix has no nontrivial related pair")
    cert = certificate if certificate is not None else singular_minor(M)
    if cert is None:
        raise IsMDS("matrix is MDS; no singular submatrix exists")
    I, J = (tuple(sorted(c)) for c in cert)
    r = len(I)
    trace = [f"singular minor rows={list(I)} cols={list(J)}"]
    f = M.field

    w = None
    if r == n:
        w = _singular_case(M, trace)
    else:
        s = solve_homogeneous(submatrix(M, I, J))
        if s is None:
            raise ConstructionDegenerate(f"certificate {cert} is not singular")
        Ic, Jc = complement(I, n), complement(J, n)
        K = submatrix(M, Ic, Jc)
        if determinant(K) == 0:
            kv = solve_homogeneous(K)
            w = _try(M, _embed(n, J, s), _embed(n, Jc, kv), Method.THM_NON_MDS, trace + ["case 1"])
        else:
            u1 = _embed(n, J, s)
            Mu1 = mat_vec_mul(M, u1)
            system = Mat(f, tuple(tuple(M.rows[i][j] for j in Jc) + (Mu1[i],) for i in Ic))
            for vec in nullspace_basis(system):
                alpha = vec[-1]
                if alpha == 0:
                    continue
                u = _embed(n, J, [f.mul(alpha, a) for a in s])
                v = _embed(n, Jc, vec[:-1])
                w = _try(M, u, v, Method.THM_NON_MDS, trace + ["case 2"])
                if w is not None:
                    break
        if w is None:
            w = _singular_case(M, trace + ["case 2 degenerate"])
    if w is None:
        w = _fallback_search(M, trace)
    if w is None:
        raise ConstructionDegenerate(f"no witness from certificate {cert}")
    return w


# -- odd-order symmetric MDS matrices


def _symmetric_odd(M: Mat) -> Witness | None:
    n = M.n_rows
    c = (n - 1) // 2
    rows = []
    for i in range(n):
        if i < c:
            rows.append(tuple(M.rows[i][j] if j >= c else 0 for j in range(n)))
        elif i == c:
            rows.append(tuple(M.rows[c][j] if j != c else 0 for j in range(n)))
        else:
            rows.append(tuple(M.rows[i][j] if j <= c else 0 for j in range(n)))
    # alternating of odd order, hence singular
    Mp = Mat(M.field, tuple(rows))
    basis = nullspace_basis(Mp)
    candidates = list(basis) + [
        tuple(a ^ b for a, b in zip(x, y)) for x, y in combinations(basis, 2)
    ]
    trace = [f"kernel dimension {len(basis)}"]
    for k, vec in enumerate(candidates):
        u = vec[: c + 1] + (0,) * (n - c - 1)
        v = (0,) * c + vec[c:]
        w = _try(M, u, v, Method.THM_SYMMETRIC_ODD, trace + [f"kernel candidate {k}"])
        if w is not None:
            return w
        log.info("kernel candidate %d gave a trivial pair", k)
    return None


def construct_symmetric_odd_witness(M: Mat, *, check_mds: bool = True) -> Witness:
    n = _square(M)
    if not is_symmetric(M):
        raise NotSymmetric("matrix is not symmetric")
    if n % 2 == 0:
        raise EvenOrder(f"order {n} is even")
    if check_mds and singular_minor(M) is not None:
        raise NotMDS("matrix is not MDS")
    w = _symmetric_odd(M)
    if w is None:
        w = _fallback_search(M, ["symmetric construction gave only trivial pairs"])
    if w is None:
        raise ConstructionDegenerate("symmetric odd construction failed")
    return w


# -- circulant matrices


def circulant_paths(n: int) -> list[str]:
    """Applicable constructions in priority order."""
    paths = []
    if n % 2 == 1:
        paths.append("odd")
    if n % 4 == 0:
        paths.append("mod4")
    if n % 3 == 0:
        paths.append("mod3")
    return paths


def is_excluded_order(n: int) -> bool:
    return n % 12 in (2, 10)


def left_circulant_permutation(n: int) -> list[int]:
    """Row permutation taking ``circ(x)`` to ``l-circ(x)``: keep row 0, reverse the rest."""
    return [0] + list(range(n - 1, 0, -1))


def _circ_split(M: Mat, poly: CirculantPoly, path: str) -> Witness | None:
    if path == "mod4":
        b1 = poly.residue_part(2, (0,))
        b2 = poly.residue_part(2, (1,))
        method = Method.CIRC_MOD4
    else:
        b1 = poly.residue_part(3, (0, 1))
        b2 = poly.residue_part(3, (0, 2))
        method = Method.CIRC_MOD3
    return _try(M, b1, b2, method, [f"{path} split of the first column"])


def _circ_odd(M: Mat) -> Witness | None:
    n = M.n_rows
    P = permutation_matrix(M.field, left_circulant_permutation(n))
    L = mat_mul(P, M)
    cert = singular_minor(L)
    if cert is None:
        wl = _symmetric_odd(L)
        via = "symmetric construction on left-circulant"
    else:
        wl = construct_nonmds_witness(L, cert)
        via = "non-MDS construction on left-circulant"
    if wl is None:
        return None
    # M = P^-1 L, so inputs carry over unchanged
    w = transform_witness_perm(wl, inverse(P), identity(M.field, n))
    return _try(M, w.u, w.v, Method.CIRC_ODD, wl.trace + [via])


def construct_circulant_witness(M: Mat) -> Witness:
    n = _square(M)
    if not is_circulant(M):
        raise NotCirculant("matrix is not circulant")
    if is_excluded_order(n):
        raise ExcludedOrder(f"n = {n} is congruent to +-2 mod 12")
    poly = CirculantPoly.from_matrix(M)
    tried = []
    for path in circulant_paths(n):
        w = _circ_odd(M) if path == "odd" else _circ_split(M, poly, path)
        if w is not None:
            w.trace = tried + w.trace
            return w
        log.info("circulant %s path gave a trivial pair, trying the next one", path)
        tried.append(f"{path} path trivial")
    w = _fallback_search(M, tried)
    if w is None:
        cert = singular_minor(M)
        if cert is not None:
            w = construct_nonmds_witness(M, cert)
            w.trace = tried + w.trace
    if w is None:
        raise ConstructionDegenerate("no circulant path or fallback produced a witness")
    return w
