"""Congruence and Frobenius sieves that build twists with prescribed
2-Selmer behaviour, the explicit semistable S3 family, and Chebotarev
density counts."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

import pandas as pd
from sympy import isprime, primerange

from .arith import REAL, Place, kronecker, valuation
from .config import CHEBOTAREV_DENSITIES
from .curve import Curve, GaloisType, ReductionType, bad_primes, frobenius_order, make_curve, minimal_model, reduction_type, two_division
from .errors import FamilyCheckFailed, HypothesesFail, NotOddPrime, TwistNotFound, WrongTorsion
from .parity import kramer_parity

logger = logging.getLogger(__name__)


class Sign(str, Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    EITHER = "Either"


@dataclass(frozen=True)
class SieveSpec:
    """Conditions on a prime p for the twist discriminant d = sign * p."""

    modulus_classes: tuple = ()  # ((modulus, residues), ...) on d
    qr_conditions: tuple = ()  # ((q, kronecker(d, q)), ...)
    frobenius_order: Optional[int] = None
    sign: Sign = Sign.POSITIVE

    def discriminant(self, p: int) -> int:
        return -p if self.sign is Sign.NEGATIVE else p

    def admits(self, E: Curve, p: int) -> bool:
        d = self.discriminant(p)
        for m, residues in self.modulus_classes:
            if d % m not in residues:
                return False
        for q, value in self.qr_conditions:
            if kronecker(d, q) != value:
                return False
        if self.frobenius_order is not None:
            return frobenius_order(E, p) == self.frobenius_order
        return True


def run_sieve(E: Curve, spec: SieveSpec, X: int) -> list:
    """Odd primes p <= X of good reduction admitted by spec, ascending."""
    M = minimal_model(E)
    return [p for p in primerange(3, X + 1) if M.disc % p and spec.admits(M, p)]


def _odd_bad(M: Curve) -> list:
    return [q for q in bad_primes(M) if q != 2]


def _require_no_rational_torsion(M: Curve) -> GaloisType:
    kind = two_division(M).galois_type
    if kind not in (GaloisType.S3, GaloisType.C3):
        raise WrongTorsion(f"{M.ainvs} has rational 2-torsion ({kind.value})")
    return kind


# =========================================================
# STABLE, STEP AND DROP TWISTS
# =========================================================
def stable_spec(E: Curve) -> SieveSpec:
    M = minimal_model(E)
    qr = []
    for q in _odd_bad(M):
        red = reduction_type(M, q)
        if red.type is ReductionType.ADDITIVE or red.ord_delta_min % 2 == 0:
            qr.append((q, 1))
    return SieveSpec(((8, (1,)),), tuple(qr), 3, Sign.POSITIVE)


def stable_twist_primes(E: Curve, X: int) -> list:
    """Primes p <= X with d_2(E^p) = d_2(E): T is empty for every one."""
    M = minimal_model(E)
    _require_no_rational_torsion(M)
    primes = run_sieve(M, stable_spec(M), X)
    logger.info("%d stable twist primes up to %d for %s", len(primes), X, M.ainvs)
    return primes


def distinguished_place(E: Curve) -> Optional[Place]:
    """An odd prime of multiplicative reduction with odd ord(Delta), else
    the real place when Delta < 0."""
    M = minimal_model(E)
    for q in _odd_bad(M):
        red = reduction_type(M, q)
        if red.type.multiplicative and red.ord_delta_min % 2:
            return q
    return REAL if M.disc < 0 else None


@dataclass(frozen=True)
class TwistCandidate:
    p: int
    d: int
    offsets: tuple  # possible d_2(E^d) - d_2(E)

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "offsets": list(self.offsets)}


def step_twist_candidates(E: Curve, X: int) -> list:
    """Primes with E(Q_p)[2] = Z/2 and every other place split: t = 1, so
    d_2 moves by exactly one in a direction the sieve cannot see."""
    M = minimal_model(E)
    if two_division(M).galois_type is not GaloisType.S3:
        raise HypothesesFail(f"{M.ainvs} does not have S3 2-division field")
    v0 = distinguished_place(M)
    if v0 is None:
        raise HypothesesFail(f"{M.ainvs} has no multiplicative odd-ord prime and Delta > 0")
    qr = tuple((q, 1) for q in _odd_bad(M) if q != v0)
    spec = SieveSpec(((8, (1,)),), qr, 2, Sign.POSITIVE)
    return [TwistCandidate(p, p, (-1, 1)) for p in run_sieve(M, spec, X)]


def drop_twist_candidates(E: Curve, X: int) -> list:
    """Primes with full local 2-torsion and every other place split: t = 2,
    envelope {d_2 - 2, d_2, d_2 + 2}."""
    M = minimal_model(E)
    qr = tuple((q, 1) for q in _odd_bad(M))
    spec = SieveSpec(((8, (1,)),), qr, 1, Sign.POSITIVE)
    return [TwistCandidate(p, p, (-2, 0, 2)) for p in run_sieve(M, spec, X)]


# =========================================================
# PARITY FLIP
# =========================================================
def flip_specs(E: Curve) -> list:
    """Sieves whose output twists flip the parity of d_2.

    Through the real place: d = -p with every finite bad place and 2 split,
    so only delta_oo and delta_p survive; they sum to 1 when Frob_p has
    order 3 (Delta > 0) or order 2 (Delta < 0).  Through an odd-ord
    multiplicative q0: d = p inert at q0, Frob_p of order 2.
    """
    M = minimal_model(E)
    odd_bad = _odd_bad(M)
    specs = [
        SieveSpec(((8, (1,)),), tuple((q, 1) for q in odd_bad), 3 if M.disc > 0 else 2, Sign.NEGATIVE)
    ]
    for q0 in odd_bad:
        red = reduction_type(M, q0)
        if red.type.multiplicative and red.ord_delta_min % 2:
            qr = tuple((q, -1 if q == q0 else 1) for q in odd_bad)
            specs.append(SieveSpec(((8, (1,)),), qr, 2, Sign.POSITIVE))
    return specs


def flip_twist(E: Curve, X: int) -> int:
    M = minimal_model(E)
    _require_no_rational_torsion(M)
    specs = flip_specs(M)
    for p in primerange(3, X + 1):
        if M.disc % p == 0:
            continue
        for spec in specs:
            if not spec.admits(M, p):
                continue
            d = spec.discriminant(p)
            if kramer_parity(M, d).flip_bit == 1:
                logger.info("parity-flipping twist of %s: d=%d", M.ainvs, d)
                return d
            logger.warning("sieve admitted d=%d for %s but the delta sum is even", d, M.ainvs)
    raise TwistNotFound(f"no parity-flipping twist of {M.ainvs} with |d| <= {X}")


# =========================================================
# EXPLICIT FAMILY
# =========================================================
def family_eta(p: int) -> int:
    """Smallest eta >= 0 with ord_p(4 eta + 1) = 1."""
    eta = (-pow(4, -1, p)) % p
    while valuation(4 * eta + 1, p) != 1:
        eta += p
    return eta


def family_curve(p: int, t0: int, eta: Optional[int] = None) -> Curve:
    """E_g : y^2 + y = x^3 - x^2 + g with g = eta + (4 eta + 1)^2 t0."""
    if p == 2 or not isprime(p):
        raise NotOddPrime(f"{p} is not an odd prime")
    if eta is None:
        eta = family_eta(p)
    g = eta + (4 * eta + 1) ** 2 * t0
    try:
        E = make_curve([0, -1, 1, 0, g])
    except ValueError as exc:
        raise FamilyCheckFailed(t0, str(exc)) from exc
    M = minimal_model(E)
    for q in bad_primes(M):
        if reduction_type(M, q).type is ReductionType.ADDITIVE:
            raise FamilyCheckFailed(t0, f"additive reduction at {q}")
    red = reduction_type(M, p)
    if not red.type.multiplicative or red.ord_delta_min != 1:
        raise FamilyCheckFailed(t0, f"ord_{p}(Delta_min) = {red.ord_delta_min}, expected 1")
    kind = two_division(M).galois_type
    if kind is not GaloisType.S3:
        raise FamilyCheckFailed(t0, f"2-division field has group {kind.value}")
    return E


# =========================================================
# DENSITY
# =========================================================
def n1_products(primes: list, X: int) -> list:
    """Squarefree products (> 1) of the given primes not exceeding X."""
    primes = sorted(primes)
    out = []

    def extend(start: int, acc: int):
        for i in range(start, len(primes)):
            value = acc * primes[i]
            if value > X:
                break
            out.append(value)
            extend(i + 1, value)

    extend(0, 1)
    return sorted(out)


@dataclass
class DensityReport:
    X: int
    counts: dict
    expected: dict
    n1_count: int
    exponent: Fraction
    galois_type: GaloisType = GaloisType.S3
    examined: int = field(default=0)

    def fractions(self) -> dict:
        total = sum(self.counts.values())
        return {k: (v / total if total else 0.0) for k, v in sorted(self.counts.items())}

    def to_frame(self) -> pd.DataFrame:
        freq = self.fractions()
        return pd.DataFrame(
            [
                {"order": k, "count": self.counts.get(k, 0), "fraction": freq.get(k, 0.0), "expected": float(self.expected[k])}
                for k in sorted(self.expected)
            ]
        )

    def to_json(self) -> dict:
        return {
            "X": self.X,
            "galoisType": self.galois_type.value,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "expected": {str(k): str(v) for k, v in sorted(self.expected.items())},
            "n1Count": self.n1_count,
            "exponent": str(self.exponent),
        }


def density_scan(E: Curve, X: int) -> DensityReport:
    M = minimal_model(E)
    kind = _require_no_rational_torsion(M)
    counts = Counter(frobenius_order(M, p) for p in primerange(3, X + 1) if M.disc % p)
    expected = {k: Fraction(v) for k, v in CHEBOTAREV_DENSITIES[kind.value].items()}
    order3 = expected.get(3, Fraction(0))
    n1 = n1_products(stable_twist_primes(M, X), X)
    report = DensityReport(
        X=X,
        counts=dict(counts),
        expected=expected,
        n1_count=len(n1),
        exponent=1 - order3,
        galois_type=kind,
        examined=sum(counts.values()),
    )
    logger.info("density scan of %s up to %d: %s", M.ainvs, X, report.fractions())
    return report
