"""Weierstrass models over Q: invariants, minimal models, reduction types,
2-division data and local 2-torsion."""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, integer_nthroot, symbols
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd, gf_monic, gf_pow_mod, gf_sub

from .arith import REAL, Place, factor, is_squarefree, kronecker, valuation
from .config import PADIC_DEPTH_CAP
from .errors import BadReductionPrime, NotSquarefree, PrecisionExhausted, SingularModel

logger = logging.getLogger(__name__)

X = symbols("x")


class ReductionType(str, Enum):
    GOOD = "good"
    MULT_SPLIT = "mult_split"
    MULT_NONSPLIT = "mult_nonsplit"
    ADDITIVE = "additive"
    REAL_PLACE = "real"

    @property
    def multiplicative(self) -> bool:
        return self in (ReductionType.MULT_SPLIT, ReductionType.MULT_NONSPLIT)


class GaloisType(str, Enum):
    S3 = "S3"
    C3 = "C3"
    C2 = "C2"
    V = "V"  # all three 2-torsion points rational


@dataclass(frozen=True)
class Curve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int = field(init=False)
    b4: int = field(init=False)
    b6: int = field(init=False)
    b8: int = field(init=False)
    c4: int = field(init=False)
    c6: int = field(init=False)
    disc: int = field(init=False)
    # primes known to cover every prime of disc; lets large discriminants skip factoring
    support: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc == 0:
            raise SingularModel(f"model {list(self.ainvs)} has zero discriminant")
        for name, value in (
            ("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8),
            ("c4", b2 * b2 - 24 * b4),
            ("c6", -b2**3 + 36 * b2 * b4 - 216 * b6),
            ("disc", disc),
        ):
            object.__setattr__(self, name, value)

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def j(self) -> Fraction:
        return Fraction(self.c4**3, self.disc)

    @property
    def cubic(self) -> tuple:
        """Coefficients of 4x^3 + b2 x^2 + 2 b4 x + b6, leading first."""
        return (4, self.b2, 2 * self.b4, self.b6)

    def to_json(self) -> dict:
        return {"a": list(self.ainvs)}

    @classmethod
    def from_json(cls, obj: dict) -> "Curve":
        return make_curve(obj["a"])


@dataclass(frozen=True)
class ReductionPlace:
    place: Place
    type: ReductionType
    ord_delta_min: int = 0
    real_sign_delta: int | None = None

    def to_json(self) -> list:
        if self.place == REAL:
            return [REAL, self.type.value, self.real_sign_delta]
        return [self.place, self.type.value, self.ord_delta_min]


@dataclass(frozen=True)
class TwoDivisionData:
    cubic: tuple
    galois_type: GaloisType
    torsion_dim_q: int


def make_curve(a) -> Curve:
    a = [int(x) for x in a]
    if len(a) != 5:
        raise SingularModel(f"expected 5 a-invariants, got {len(a)}")
    return Curve(*a)


def curve_from_roots(e1: int, e2: int, e3: int) -> Curve:
    """The model y^2 = (x - e1)(x - e2)(x - e3)."""
    support = {2}
    for diff in (e1 - e2, e1 - e3, e2 - e3):
        if diff:
            support |= set(factor(diff).primes())
    return Curve(0, -(e1 + e2 + e3), 0, e1 * e2 + e1 * e3 + e2 * e3, -e1 * e2 * e3, support=tuple(sorted(support)))


# =========================================================
# MINIMAL MODELS
# =========================================================
def _kraus_ok(c4: int, c6: int, p: int) -> bool:
    """Kraus' local conditions for (c4, c6) to come from an integral model."""
    if p == 3:
        return c6 == 0 or valuation(c6, 3) != 2
    if c6 % 4 == 3:
        return True
    return (c4 == 0 or valuation(c4, 2) >= 4) and c6 % 32 in (0, 8)


def _scaling_exponent(c4: int, c6: int, disc: int, p: int) -> int:
    e = valuation(disc, p) // 12
    if c4:
        e = min(e, valuation(c4, p) // 4)
    if c6:
        e = min(e, valuation(c6, p) // 6)
    if p in (2, 3):
        while e > 0 and not _kraus_ok(c4 // p ** (4 * e), c6 // p ** (6 * e), p):
            e -= 1
    return e


def _model_from_c4c6(c4: int, c6: int) -> Curve:
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4 = (b2 * b2 - c4) // 24
    b6 = (-b2**3 + 36 * b2 * b4 - c6) // 216
    a1 = b2 % 2
    a3 = b6 % 2
    return Curve(a1, (b2 - a1) // 4, a3, (b4 - a1 * a3) // 2, (b6 - a3) // 4)


def _disc_primes(E: Curve) -> list:
    if E.support:
        rest = abs(E.disc)
        found = []
        for p in E.support:
            if rest % p == 0:
                found.append(p)
                while rest % p == 0:
                    rest //= p
        if rest == 1:
            return found
        logger.debug("support %s does not cover disc of %s; factoring", E.support, E.ainvs)
    return factor(E.disc).primes()


@lru_cache(maxsize=4096)
def _minimal_model(E: Curve) -> Curve:
    u = 1
    for p in _disc_primes(E):
        e = _scaling_exponent(E.c4, E.c6, E.disc, p)
        u *= p**e
    if u == 1:
        return E
    M = _model_from_c4c6(E.c4 // u**4, E.c6 // u**6)
    logger.debug("minimal model of %s is %s (u=%d)", E.ainvs, M.ainvs, u)
    return replace(M, support=E.support)


def minimal_model(E: Curve) -> Curve:
    """Globally minimal model; E itself when E is already minimal."""
    M = _minimal_model(E)
    if E.support and not M.support:
        M = replace(M, support=E.support)
    return M



# =========================================================
# REDUCTION
# =========================================================
def reduction_type(E: Curve, p: Place) -> ReductionPlace:
    M = minimal_model(E)
    if p == REAL:
        return ReductionPlace(REAL, ReductionType.REAL_PLACE, 0, 1 if M.disc > 0 else -1)
    k = valuation(M.disc, p)
    if k == 0:
        return ReductionPlace(p, ReductionType.GOOD, 0)
    if M.c4 % p == 0:
        return ReductionPlace(p, ReductionType.ADDITIVE, k)
    # split iff -c6 is a square in Q_p; c6 is a p-unit here
    if p == 2:
        split = (-M.c6) % 8 == 1
    else:
        split = kronecker(-M.c6, p) == 1
    kind = ReductionType.MULT_SPLIT if split else ReductionType.MULT_NONSPLIT
    return ReductionPlace(p, kind, k)


def bad_primes(E: Curve) -> list:
    return _disc_primes(minimal_model(E))


def local_data(E: Curve) -> list:
    return [reduction_type(E, REAL)] + [reduction_type(E, p) for p in bad_primes(E)]


# =========================================================
# 2-DIVISION
# =========================================================
def _cubic_poly(E: Curve) -> Poly:
    return Poly(list(E.cubic), X, domain=ZZ)


def _rational_root_count(f: Poly) -> int:
    _, factors = f.factor_list()
    return sum(m for g, m in factors if g.degree() == 1)


def _is_square(n: int) -> bool:
    return n > 0 and integer_nthroot(n, 2)[1]


def two_division(E: Curve) -> TwoDivisionData:
    M = minimal_model(E)
    roots = _rational_root_count(_cubic_poly(M))
    if roots == 3:
        kind, dim = GaloisType.V, 2
    elif roots == 1:
        kind, dim = GaloisType.C2, 1
    else:
        kind = GaloisType.C3 if _is_square(M.disc) else GaloisType.S3
        dim = 0
    return TwoDivisionData(M.cubic, kind, dim)


def _roots_mod_p(coeffs: tuple, p: int) -> int:
    f = [c % p for c in coeffs]
    _, f = gf_monic(f, p, ZZ)
    xp = gf_pow_mod([1, 0], p, f, p, ZZ)
    g = gf_gcd(gf_sub(xp, [1, 0], p, ZZ), f, p, ZZ)
    return len(g) - 1


def frobenius_order(E: Curve, p: int) -> int:
    """Order of Frob_p on E[2] for p of good reduction, p odd."""
    M = minimal_model(E)
    if p == 2 or M.disc % p == 0:
        raise BadReductionPrime(f"{p} divides 2*disc_min")
    return {0: 3, 1: 2, 3: 1}[_roots_mod_p(M.cubic, p)]


def _zp_root_count(f: Poly, p: int, depth: int = 0) -> int:
    """Number of roots of the separable polynomial f in Z_p."""
    if depth > PADIC_DEPTH_CAP:
        raise PrecisionExhausted(f"p-adic root count did not stabilise at p={p}")
    content = int(f.content())
    f = f.exquo_ground(p ** valuation(content, p))
    df = f.diff(X)
    count = 0
    for r in range(p):
        if f.eval(r) % p:
            continue
        if df.eval(r) % p:
            count += 1  # Hensel
            continue
        count += _zp_root_count(f.compose(Poly(p * X + r, X, domain=ZZ)), p, depth + 1)
    return count


def qp_root_count(coeffs: tuple, p: int) -> int:
    f = Poly(list(coeffs), X, domain=ZZ)
    # roots of negative valuation are p * (roots of the reversed polynomial)
    rev = Poly(list(reversed(coeffs)), X, domain=ZZ).compose(Poly(p * X, X, domain=ZZ))
    return _zp_root_count(f, p) + _zp_root_count(rev, p)


def _roots_to_dim(count: int, place: Place) -> int:
    if count not in (0, 1, 3):
        raise PrecisionExhausted(f"inconsistent root count {count} at {place}")
    return {0: 0, 1: 1, 3: 2}[count]


@lru_cache(maxsize=16384)
def local_two_torsion_dim(E: Curve, v: Place) -> int:
    """F_2-dimension of E(Q_v)[2]."""
    M = minimal_model(E)
    if v == REAL:
        return _roots_to_dim(_cubic_poly(M).count_roots(), v)
    if v != 2 and M.disc % v:
        return _roots_to_dim(_roots_mod_p(M.cubic, v), v)
    return _roots_to_dim(qp_root_count(M.cubic, v), v)


# =========================================================
# TWISTS
# =========================================================
def twist(E: Curve, d: int) -> Curve:
    """Minimal model of the quadratic twist by Q(sqrt(d))."""
    if d == 0 or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not a squarefree nonzero integer")
    # y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6 has invariants (6^4 d^2 c4, 6^6 d^3 c6)
    support = {2, 3} | set(bad_primes(E)) | set(factor(d).primes())
    short = Curve(0, 0, 0, -27 * d * d * E.c4, -54 * d**3 * E.c6, support=tuple(sorted(support)))
    return minimal_model(short)
