"""Exhaustive count of 3x3 MDS matrices with and without related differentials.

Only bordered matrices ``[[1,1,1],[1,a,b],[1,c,d]]`` are enumerated; each one
stands for ``(2^m - 1)^5`` matrices ``D1 M1 D2``.  Work is split by ``a``.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import product

import numpy as np

from .core import search_bounded, search_full
from .errors import TooLarge
from .gf import Field, get_field, to_hex
from .linalg import Mat
from .rd3 import conditions15

MAX_M = 8
_BLOCK = 1 << 21


def closed_form_mds(m: int) -> int:
    q = 1 << m
    return (q - 1) ** 5 * (q - 2) * (q - 3) * (q * q - 9 * q + 21)


def bordered(field: Field, a: int, b: int, c: int, d: int) -> Mat:
    return Mat(field, ((1, 1, 1), (1, a, b), (1, c, d)))


def is_mds_bordered(field: Field, a: int, b: int, c: int, d: int) -> bool:
    """MDS test for the bordered matrix with nonzero a, b, c, d via its 2x2 and 3x3 minors."""
    s = field.mul(a, d) ^ field.mul(b, c)
    return (
        a != 1 and b != 1 and c != 1 and d != 1
        and a != b and c != d and a != c and b != d
        and s != 0 and s ^ a ^ b ^ c ^ d != 0
    )


def classify_block(field: Field, a: int, bs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """MDS and no-RD masks of shape ``(len(bs), q-1, q-1)`` over ``(b, c, d)``."""
    q = field.order
    mt = field.mul_table().astype(np.int32)
    e = np.arange(1, q, dtype=np.int32)
    B = bs.astype(np.int32)[:, None, None]
    C = e[None, :, None]
    D = e[None, None, :]
    ad = mt[a][D]
    bc = mt[B, C]
    s = ad ^ bc
    mds = (s != 0) & ((s ^ a ^ B ^ C ^ D) != 0)
    mds &= (B != 1) & (C != 1) & (D != 1) & (B != a) & (C != D) & (C != a) & (B != D)
    if a == 1:
        mds[...] = False
    no_rd = mds.copy()
    for expr in (
        a ^ B ^ C ^ D,
        a ^ D,
        B ^ C,
        s ^ a ^ B,
        s ^ a ^ C,
        s ^ B ^ D,
        s ^ C ^ D,
        ad ^ a ^ B ^ D,
        ad ^ a ^ C ^ D,
        ad ^ B,
        ad ^ C,
        bc ^ a ^ B ^ C,
        bc ^ B ^ C ^ D,
        bc ^ a,
        bc ^ D,
    ):
        no_rd &= expr != 0
    return mds, no_rd


def count_chunk(m: int, modulus: int, a: int) -> tuple[int, int]:
    field = get_field(m, modulus)
    q = field.order
    step = max(1, _BLOCK // ((q - 1) ** 2))
    bs_all = np.arange(1, q)
    n_mds = n_free = 0
    for lo in range(0, q - 1, step):
        mds, no_rd = classify_block(field, a, bs_all[lo : lo + step])
        n_mds += int(mds.sum())
        n_free += int(no_rd.sum())
    return n_mds, n_free


def _count_star(args):
    return count_chunk(*args)


@dataclass
class EnumResult:
    m: int
    modulus: int
    mds_quadruples: int
    no_rd_quadruples: int
    elapsed: float = 0.0

    @property
    def scale(self) -> int:
        return ((1 << self.m) - 1) ** 5

    @property
    def total_mds(self) -> int:
        return self.mds_quadruples * self.scale

    @property
    def total_no_rd(self) -> int:
        return self.no_rd_quadruples * self.scale

    def to_json(self, *, timings: bool = False) -> dict:
        out = {
            "m": self.m,
            "modulus": to_hex(self.modulus),
            "mds_quadruples": self.mds_quadruples,
            "no_rd_quadruples": self.no_rd_quadruples,
            "total_mds": self.total_mds,
            "total_no_rd": self.total_no_rd,
        }
        if timings:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    def to_csv(self) -> str:
        d = self.to_json()
        return ",".join(d) + "\n" + ",".join(str(v) for v in d.values()) + "\n"


def enumerate3(field: Field, jobs: int = 1) -> EnumResult:
    if not 3 <= field.m <= MAX_M:
        raise TooLarge(f"enumeration supports 3 <= m <= {MAX_M}, got {field.m}")
    t0 = time.perf_counter()
    tasks = [(field.m, field.modulus, a) for a in field.nonzero()]
    if jobs <= 1:
        parts = [count_chunk(*t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_count_star, tasks))
    # reduction in fixed chunk order
    n_mds = sum(p[0] for p in parts)
    n_free = sum(p[1] for p in parts)
    return EnumResult(field.m, field.modulus, n_mds, n_free, time.perf_counter() - t0)


@dataclass
class SpotCheckReport:
    checked: dict = dc_field(default_factory=dict)
    disagreements: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _sample_classes(field: Field, sample_size: int, rng: random.Random) -> dict:
    classes = {"has": [], "none": []}
    q = field.order
    if (q - 1) ** 4 <= 1 << 16:
        for quad in product(field.nonzero(), repeat=4):
            if is_mds_bordered(field, *quad):
                classes["none" if not conditions15(field, *quad) else "has"].append(quad)
        return {k: rng.sample(v, min(sample_size, len(v))) for k, v in classes.items()}
    seen = set()
    for _ in range(200 * max(sample_size, 1)):
        if all(len(v) >= sample_size for v in classes.values()):
            break
        quad = tuple(rng.randrange(1, q) for _ in range(4))
        if quad in seen or not is_mds_bordered(field, *quad):
            continue
        seen.add(quad)
        cls = "none" if not conditions15(field, *quad) else "has"
        if len(classes[cls]) < sample_size:
            classes[cls].append(quad)
    return classes


def spot_check(field: Field, sample_size: int, seed: int = 0) -> SpotCheckReport:
    """Re-decide sampled quadruples of each verdict class with the search oracles."""
    report = SpotCheckReport()
    if sample_size <= 0:
        return report
    rng = random.Random(seed)
    for cls, quads in _sample_classes(field, sample_size, rng).items():
        report.checked[cls] = len(quads)
        for quad in quads:
            M1 = bordered(field, *quad)
            found = {"search-bounded": search_bounded(M1) is not None}
            if 3 * field.m <= 20:
                found["search-full"] = search_full(M1) is not None
            for name, has in found.items():
                if has != (cls == "has"):
                    report.disagreements.append((quad, cls, name))
    return report
