"""Route a matrix to the cheapest complete related-differential method."""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

from .construct import (
    construct_circulant_witness,
    construct_nonmds_witness,
    construct_symmetric_odd_witness,
    is_excluded_order,
)
from .core import Method, Witness, search_bounded, search_full, verify_witness
from .errors import NonSquare, RDError, TooLarge
from .linalg import (
    Mat,
    branch_number_differential,
    branch_number_linear,
    is_circulant,
    is_symmetric,
    singular_minor,
)
from .rd3 import CONDITION_LABELS, rd_status_3x3


class VerificationFailure(RDError):
    """A constructed witness failed re-verification, or two complete methods disagree."""


@dataclass
class AnalysisReport:
    n: int
    mds: bool
    branch_diff: int | None
    branch_lin: int | None
    rd: str
    method: str | None
    witness: Witness | None
    conditions: list | None = None
    trace: list = dc_field(default_factory=list)
    timings: dict = dc_field(default_factory=dict)

    def to_json(self, field, *, timings: bool = False) -> dict:
        out = {
            "mds": self.mds,
            "branch_diff": self.branch_diff,
            "branch_lin": self.branch_lin,
            "rd": self.rd,
            "method": self.method,
            "witness": None if self.witness is None else self.witness.to_json(field),
            "trace": list(self.trace),
        }
        if self.conditions is not None:
            out["conditions"] = [
                {"id": c, "condition": CONDITION_LABELS[c]} for c in self.conditions
            ]
        if timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out


def _check(M: Mat, w: Witness) -> Witness:
    if not verify_witness(M, w):
        raise VerificationFailure(f"witness from {w.method.value} failed verification")
    return w


def analyze(M: Mat, *, cross_check: bool = False) -> AnalysisReport:
    if not M.is_square:
        raise NonSquare(f"expected a square matrix, got {M.n_rows}x{M.n_cols}")
    n = M.n_rows
    trace = []
    timings = {}

    t0 = time.perf_counter()
    cert = singular_minor(M)
    timings["mds"] = time.perf_counter() - t0
    mds = cert is None
    trace.append("MDS" if mds else f"not MDS: singular minor rows={list(cert[0])} cols={list(cert[1])}")

    t0 = time.perf_counter()
    try:
        bd, bl = branch_number_differential(M), branch_number_linear(M)
    except TooLarge as exc:
        bd = bl = None
        trace.append(f"branch numbers skipped: {exc}")
    timings["branch"] = time.perf_counter() - t0

    rd, method, witness, conditions = "unknown", None, None, None
    t0 = time.perf_counter()
    if not mds:
        witness = _check(M, construct_nonmds_witness(M, cert))
        rd, method = "has", witness.method.value
    elif n == 3:
        st = rd_status_3x3(M)
        conditions = st.conditions
        rd, method = st.verdict, Method.CHAR_3X3.value
        if st.has_rd:
            witness = _check(M, st.witness)
        trace.append(f"conditions satisfied: {conditions or 'none'}")
    elif is_circulant(M) and not is_excluded_order(n):
        witness = _check(M, construct_circulant_witness(M))
        rd, method = "has", witness.method.value
    elif n % 2 == 1 and is_symmetric(M):
        witness = _check(M, construct_symmetric_odd_witness(M, check_mds=False))
        rd, method = "has", witness.method.value
    else:
        for name, search in (("search-bounded", search_bounded), ("search-full", search_full)):
            try:
                witness = search(M)
            except TooLarge as exc:
                trace.append(f"{name} skipped: {exc}")
                continue
            rd, method = ("has" if witness else "none"), name
            if witness is not None:
                _check(M, witness)
            break
    timings["decide"] = time.perf_counter() - t0
    if witness is not None:
        trace.extend(witness.trace)

    if cross_check and rd != "unknown" and method != "search-full":
        try:
            other = search_full(M)
        except TooLarge as exc:
            trace.append(f"cross-check skipped: {exc}")
        else:
            if (other is not None) != (rd == "has"):
                raise VerificationFailure(f"full search disagrees with {method}")
            trace.append("cross-check: full search agrees")

    return AnalysisReport(n, mds, bd, bl, rd, method, witness, conditions, trace, timings)
