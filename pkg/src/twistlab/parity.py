"""Global parity engine: Kramer's congruence for d_2 under quadratic twist,
the admissible-twist Selmer envelope, local root numbers and the
constant-parity classifier."""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Optional

from .arith import REAL, is_squarefree, kronecker, valuation
from .curve import Curve, ReductionType, bad_primes, local_two_torsion_dim, minimal_model, reduction_type, twist
from .errors import NotAdmissible, OutOfDomain, OutOfRange, UnresolvedPlace, UnsupportedPlace
from .localdata import (
    NormIndexReport,
    ParityFlag,
    PlaceDescriptor,
    Violation,
    admissible,
    d_parity,
    norm_index_report,
)

logger = logging.getLogger(__name__)


# =========================================================
# KRAMER CONGRUENCE
# =========================================================
@dataclass(frozen=True)
class ParityPrediction:
    flip_bit: int
    per_place: NormIndexReport
    basis: tuple
    predicted_parity: Optional[int] = None


def kramer_parity(E: Curve, d, d2_base: Optional[int] = None) -> ParityPrediction:
    """d_2(E^d) = d_2(E) + sum_v delta_v (mod 2)."""
    report = norm_index_report(E, d)
    if report.total_parity is None:
        raise UnsupportedPlace(report.unsupported_places()[0])
    flip = report.total_parity
    basis = tuple(rule for _, _, rule in report.entries)
    predicted = None if d2_base is None else (d2_base + flip) % 2
    return ParityPrediction(flip, report, basis, predicted)


# =========================================================
# SELMER ENVELOPE
# =========================================================
@dataclass(frozen=True)
class SelmerEnvelope:
    T: tuple
    t: int
    possible: tuple
    exact: Optional[int] = None


def _envelope_values(d2_base: int, t: int, dim_vt: int) -> set:
    # d_2(E^d) = d_2(E) - dim V_T + dd, 0 <= dd <= t - dim V_T, dd = t - dim V_T (mod 2)
    top = t - dim_vt
    return {d2_base - dim_vt + dd for dd in range(top % 2, top + 1, 2)}


def selmer_envelope(E: Curve, d, d2_base: int, dim_vt: Optional[int] = None) -> SelmerEnvelope:
    adm = admissible(E, d)
    if isinstance(adm, Violation):
        raise NotAdmissible(adm.reason)
    M = minimal_model(E)
    t = sum(local_two_torsion_dim(M, p) for p in adm.T)
    if not adm.T:
        return SelmerEnvelope((), 0, (d2_base,), d2_base)
    if dim_vt is not None:
        if not 0 <= dim_vt <= min(d2_base, t):
            raise OutOfRange(f"dim V_T = {dim_vt} outside [0, {min(d2_base, t)}]")
        values = _envelope_values(d2_base, t, dim_vt)
        exact = d2_base - 2 * dim_vt + t if t - dim_vt <= 1 else None
    else:
        values = set()
        for v in range(min(d2_base, t) + 1):
            values |= _envelope_values(d2_base, t, v)
        exact = None
    possible = tuple(sorted(x for x in values if x >= 0))
    if exact is None and len(possible) == 1:
        exact = possible[0]
    return SelmerEnvelope(adm.T, t, possible, exact)


# =========================================================
# ROOT NUMBERS
# =========================================================
@dataclass(frozen=True)
class RootNumberReport:
    global_: Optional[int]
    local: tuple  # ((place, +-1), ...)
    domain_ok: bool

    def to_json(self) -> dict:
        return {"global": self.global_, "local": [list(x) for x in self.local], "domainOK": self.domain_ok}


_ADDITIVE_TWIST = {2: -1, 6: -1, 3: -3, 4: -2}


def _local_root_number(M: Curve, p: int) -> int:
    red = reduction_type(M, p)
    if red.type is ReductionType.GOOD:
        return 1
    if red.type is ReductionType.MULT_SPLIT:
        return -1
    if red.type is ReductionType.MULT_NONSPLIT:
        return 1
    if p in (2, 3):
        raise OutOfDomain(f"additive reduction at {p}")
    if M.c4 and valuation(M.j, p) < 0:
        return kronecker(-1, p)  # potentially multiplicative
    e = 12 // gcd(red.ord_delta_min, 12)
    if e not in _ADDITIVE_TWIST:
        raise OutOfDomain(f"unexpected additive data at {p} (ord Delta = {red.ord_delta_min})")
    return kronecker(_ADDITIVE_TWIST[e], p)


def root_number(E: Curve, strict: bool = True) -> RootNumberReport:
    """Global root number as the product of local ones.

    Additive reduction at 2 or 3 is outside the tabulated domain: raises
    OutOfDomain, or with ``strict=False`` returns a report with no global
    value.
    """
    M = minimal_model(E)
    local = [(REAL, -1)]
    try:
        for p in bad_primes(M):
            local.append((p, _local_root_number(M, p)))
    except OutOfDomain:
        if strict:
            raise
        return RootNumberReport(None, tuple(local), False)
    w = 1
    for _, eps in local:
        w *= eps
    return RootNumberReport(w, tuple(local), True)


def parity_crosscheck(E: Curve, descent_d2: int) -> bool:
    """(-1)^d_2 should equal the root number when E[2] is rational."""
    w = root_number(E).global_
    return (-1) ** descent_d2 == w


# =========================================================
# CONSTANT PARITY
# =========================================================
@dataclass(frozen=True)
class ConstantParityVerdict:
    constant: bool
    witness: Optional[PlaceDescriptor] = None

    def to_json(self) -> dict:
        if self.constant:
            return {"verdict": "Constant"}
        return {"verdict": "NotConstant", "witness": self.witness.to_json()}


def classify_constant_parity(places: list) -> ConstantParityVerdict:
    flags = [d_parity(desc) for desc in places]
    for desc, flag in zip(places, flags):
        if flag is ParityFlag.NO:
            return ConstantParityVerdict(False, desc)
    unresolved = [desc for desc, flag in zip(places, flags) if flag is ParityFlag.UNKNOWN]
    if unresolved:
        raise UnresolvedPlace(f"{len(unresolved)} place(s) with unknown Delta-parity, first {unresolved[0].to_json()}")
    return ConstantParityVerdict(True)


def parity_flip_witness(E: Curve, bound: int) -> Optional[int]:
    """Smallest |d| <= bound (positive first) whose twist has odd delta-sum,
    with every local index supported."""
    for n in range(1, bound + 1):
        for d in (n, -n):
            if d == 1 or not is_squarefree(d):
                continue
            report = norm_index_report(E, d)
            if report.total_parity == 1:
                logger.info("parity flip witness for %s: d=%d", minimal_model(E).ainvs, d)
                return d
    return None


# =========================================================
# RECORDS
# =========================================================
def twist_record(E: Curve, d) -> dict:
    """JSONL-ready record of the parity prediction for one twist."""
    report = norm_index_report(E, d)
    flip = report.total_parity
    rn = root_number(twist(E, int(d)), strict=False)
    return {
        "curve": minimal_model(E).to_json(),
        "d": int(d),
        "flip": flip,
        "delta": report.to_json(),
        "rootNumber": rn.global_,
    }
