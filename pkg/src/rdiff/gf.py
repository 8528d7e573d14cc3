"""Arithmetic in GF(2^m) with elements encoded as polynomial-basis integers.

Bit ``i`` of an element code is the coefficient of ``x^i``.  A :class:`Field`
is immutable once built and can be shared freely between worker processes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    ReducibleModulus,
    UnsupportedDegree,
)

MIN_DEGREE = 2
MAX_DEGREE = 16
TABLE_MAX_DEGREE = 12

DEFAULT_MODULI = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1002B,
}


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of ``a`` divided by ``b`` in GF(2)[x]."""
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    d = poly_degree(p)
    if d < 1:
        return False
    for f in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, f) == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def to_hex(a: int) -> str:
    return format(a, "#x")


def from_hex(s: str | int) -> int:
    if isinstance(s, int):
        return s
    return int(s, 16)


class Field:
    """The finite field GF(2^m) defined by an irreducible ``modulus``."""

    def __init__(self, m: int, modulus: int | None = None):
        if not MIN_DEGREE <= m <= MAX_DEGREE:
            raise UnsupportedDegree(f"m must lie in [{MIN_DEGREE}, {MAX_DEGREE}], got {m}")
        if modulus is None:
            modulus = DEFAULT_MODULI[m]
        if poly_degree(modulus) != m:
            raise DegreeMismatch(f"modulus {to_hex(modulus)} does not have degree {m}")
        if not is_irreducible(modulus):
            raise ReducibleModulus(f"modulus {to_hex(modulus)} is reducible over GF(2)")
        self.m = m
        self.modulus = modulus
        self.order = 1 << m
        self.mask = self.order - 1
        self.generator = self._find_generator()
        self.exp: list[int] | None = None
        self.log: list[int] | None = None
        if m <= TABLE_MAX_DEGREE:
            self._build_tables()
        self._np_exp = None
        self._np_log = None
        self._np_mul_table = None

    def __repr__(self) -> str:
        return f"Field(m={self.m}, modulus={to_hex(self.modulus)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.m, self.modulus) == (other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.m, self.modulus))

    def __reduce__(self):
        return (Field, (self.m, self.modulus))

    # -- construction helpers

    def _find_generator(self) -> int:
        n = self.order - 1
        factors = _prime_factors(n)
        for g in range(2, self.order):
            if all(self.pow_slow(g, n // p) != 1 for p in factors):
                return g
        raise AssertionError("multiplicative group has no generator")

    def _build_tables(self) -> None:
        n = self.order - 1
        exp = [0] * (2 * n)
        log = [-1] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self.mul_slow(x, self.generator)
        exp[n:] = exp[:n]
        self.exp = exp
        self.log = log

    # -- scalar arithmetic

    def elements(self) -> range:
        return range(self.order)

    def nonzero(self) -> range:
        return range(1, self.order)

    def contains(self, a: int) -> bool:
        return 0 <= a < self.order

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul_slow(self, a: int, b: int) -> int:
        """Shift-and-reduce multiplication."""
        r = 0
        top = self.order
        mod = self.modulus
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def pow_slow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self.mul_slow(r, a)
            a = self.mul_slow(a, a)
            k >>= 1
        return r

    def mul(self, a: int, b: int) -> int:
        if self.exp is None:
            return self.mul_slow(a, b)
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no multiplicative inverse")
        if self.exp is None:
            return self.pow_slow(a, self.order - 2)
        return self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        if self.exp is None:
            return self.pow_slow(a, k)
        return self.exp[(self.log[a] * k) % (self.order - 1)]

    # -- vectorised arithmetic

    def _np_tables(self):
        if self._np_exp is None:
            if self.exp is None:
                n = self.order - 1
                exp = [0] * (2 * n)
                log = [-1] * self.order
                x = 1
                for i in range(n):
                    exp[i] = x
                    log[x] = i
                    x = self.mul_slow(x, self.generator)
                exp[n:] = exp[:n]
            else:
                exp, log = self.exp, self.log
            self._np_exp = np.asarray(exp + [0], dtype=np.int64)
            self._np_log = np.asarray(log, dtype=np.int64)
        return self._np_exp, self._np_log

    def vmul(self, a, b) -> np.ndarray:
        """Elementwise product of integer arrays (broadcasting)."""
        exp, log = self._np_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la = log[a]
        lb = log[b]
        # index 2(q-1) of the padded exp table holds the zero product
        idx = np.where((la < 0) | (lb < 0), 2 * (self.order - 1), la + lb)
        return exp[idx]

    def mul_table(self) -> np.ndarray:
        """Full ``q x q`` product table; only sensible for small m."""
        if self._np_mul_table is None:
            e = np.arange(self.order, dtype=np.int64)
            self._np_mul_table = self.vmul(e[:, None], e[None, :])
        return self._np_mul_table


@lru_cache(maxsize=None)
def get_field(m: int, modulus: int | None = None) -> Field:
    """Cached :class:`Field` constructor; the default modulus is used when omitted."""
    if modulus is None:
        modulus = DEFAULT_MODULI.get(m)
    return Field(m, modulus)


def field_new(m: int, modulus: int | None = None) -> Field:
    return get_field(m, modulus)
