"""Complete 2-descent for curves y^2 = (x - e1)(x - e2)(x - e3).

Sel_2 is cut out of Q(S, 2)^2 (S = primes dividing 2 * disc) by the local
Kummer images W_v.  Each W_v is sampled from local points with rational
x-coordinate; sampling stops once W_v reaches its known dimension
h^1_f(v).  All linear algebra is over F_2 on bit vectors indexed by the
generators [-1, p_1, ..., p_k] of Q(S, 2).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np
import pandas as pd

from . import f2
from .arith import REAL, Place, SquareClass, factor, is_local_square, is_squarefree, square_class_bits, square_class_width, valuation
from .config import (
    DESCENT_BOUND,
    LOCAL_IMAGE_DENOMINATOR_DEPTH,
    LOCAL_IMAGE_EXTRA_ODD,
    LOCAL_IMAGE_EXTRA_TWO,
    LOCAL_IMAGE_MAX_DOUBLINGS,
    LOCAL_IMAGE_START_CAP,
)
from .curve import Curve, curve_from_roots
from .errors import NotAdmissible, OutOfRange, PrecisionExhausted, TwistlabError
from .localdata import Violation, admissible, conductor
from .parity import selmer_envelope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FullTorsionCurve:
    e1: int
    e2: int
    e3: int

    def __post_init__(self):
        roots = (self.e1, self.e2, self.e3)
        if len(set(roots)) != 3:
            raise TwistlabError(f"roots {roots} are not distinct")
        if max(abs(e) for e in roots) > DESCENT_BOUND:
            raise OutOfRange(f"roots {roots} exceed the descent bound {DESCENT_BOUND}")

    @property
    def roots(self) -> tuple:
        return (self.e1, self.e2, self.e3)

    @property
    def curve(self) -> Curve:
        return curve_from_roots(*self.roots)

    @property
    def bad_support(self) -> tuple:
        e1, e2, e3 = self.roots
        return tuple(factor(2 * (e1 - e2) * (e1 - e3) * (e2 - e3)).primes())

    def f(self, x: Fraction) -> Fraction:
        return (x - self.e1) * (x - self.e2) * (x - self.e3)

    def to_json(self) -> dict:
        return {"e": list(self.roots)}

    @classmethod
    def from_json(cls, obj: dict) -> "FullTorsionCurve":
        return cls(*(int(e) for e in obj["e"]))


def twist_full(E: FullTorsionCurve, d: int) -> FullTorsionCurve:
    """The twist d*y^2 = f(x), written as Y^2 = (X - d e1)(X - d e2)(X - d e3)."""
    if d == 0 or not is_squarefree(d):
        raise TwistlabError(f"{d} is not a squarefree nonzero integer")
    return FullTorsionCurve(d * E.e1, d * E.e2, d * E.e3)


def torsion_images(E: FullTorsionCurve) -> list:
    """Kummer images (x - e1, x - e2) of T1, T2, T3 as integer pairs."""
    e1, e2, e3 = E.roots
    return [
        ((e1 - e2) * (e1 - e3), e1 - e2),
        (e2 - e1, (e2 - e1) * (e2 - e3)),
        (e3 - e1, e3 - e2),
    ]


# =========================================================
# LOCAL IMAGES
# =========================================================
def _pair_bits(a, b, v: Place) -> tuple:
    return square_class_bits(a, v) + square_class_bits(b, v)


def _sample_points(E: FullTorsionCurve, v: Place, limit: int) -> Iterable:
    """x-coordinates c + a / p^(2j) around 0 and each root, |a| growing."""
    centers = (0,) + E.roots
    if v == REAL:
        scales = [Fraction(1, 4**j) for j in range(LOCAL_IMAGE_DENOMINATOR_DEPTH + 1)]
    else:
        scales = [Fraction(1, v ** (2 * j)) for j in range(LOCAL_IMAGE_DENOMINATOR_DEPTH + 1)]
    yield from ((c + a * s) for a in _signed_range(limit) for c in centers for s in scales)


def _signed_range(limit: int) -> Iterable:
    yield 0
    for a in range(1, limit + 1):
        yield a
        yield -a


def _start_limit(E: FullTorsionCurve, v: Place) -> int:
    if v == REAL:
        return 4
    e1, e2, e3 = E.roots
    k = valuation((e1 - e2) * (e1 - e3) * (e2 - e3), v)
    extra = LOCAL_IMAGE_EXTRA_TWO if v == 2 else LOCAL_IMAGE_EXTRA_ODD
    return min(v ** (k + extra), LOCAL_IMAGE_START_CAP)


def _h1f(v: Place) -> int:
    # E(Q_v)[2] has dimension 2 everywhere when all three roots are rational
    if v == REAL:
        return 1
    return 3 if v == 2 else 2


@lru_cache(maxsize=8192)
def local_image(E: FullTorsionCurve, v: Place) -> np.ndarray:
    """Basis rows of W_v inside (Q_v^x/sq)^2, as bits (x - e1 | x - e2)."""
    width = square_class_width(v)
    target = _h1f(v)
    if v != REAL and v != 2 and v not in E.bad_support:
        # good odd place: the unramified classes
        rows = np.zeros((2, 2 * width), dtype=np.uint8)
        rows[0, 1] = rows[1, 3] = 1
        return rows
    span = f2.span_basis([_pair_bits(a, b, v) for a, b in torsion_images(E)], 2 * width)
    if span.shape[0] >= target:
        return span
    limit = _start_limit(E, v)
    checked = 0
    for doubling in range(LOCAL_IMAGE_MAX_DOUBLINGS + 1):
        for x in _sample_points(E, v, limit):
            if x in E.roots:
                continue
            fx = E.f(x)
            if not is_local_square(fx, v):
                continue
            bits = _pair_bits(x - E.e1, x - E.e2, v)
            if not f2.in_span(span, bits):
                span = f2.span_basis(np.vstack([span, f2.as_f2(bits)]), 2 * width)
                if span.shape[0] == target:
                    logger.debug("W_%s of %s saturated at limit %d", v, E.roots, limit)
                    return span
        checked = limit
        limit *= 2
    raise PrecisionExhausted(
        f"local image at {v} for {E.roots} reached dim {span.shape[0]} < {target} after |a| <= {checked}"
    )


# =========================================================
# SELMER SPACES
# =========================================================
def _generators(support: Iterable) -> list:
    return [-1] + sorted(set(support))


def _local_map(gens: list, v: Place) -> np.ndarray:
    """Matrix of (b1, b2) -> loc_v(b1, b2) on the generator bit basis."""
    w = square_class_width(v)
    n = len(gens)
    L = np.zeros((2 * w, 2 * n), dtype=np.uint8)
    for k, g in enumerate(gens):
        bits = square_class_bits(g, v)
        L[:w, k] = bits
        L[w:, n + k] = bits
    return L


def _global_bits(a: int, gens: list) -> np.ndarray:
    bits = np.zeros(len(gens), dtype=np.uint8)
    if a < 0:
        bits[0] = 1
    for p, e in factor(a).factors:
        if e % 2:
            bits[gens.index(p)] = 1
    return bits


def _class_of(bits, gens: list) -> SquareClass:
    value = 1
    for b, g in zip(bits, gens):
        if b:
            value *= g
    return SquareClass(value)


def _selmer_rows(E: FullTorsionCurve, support: Iterable, relaxed=(), strict=()) -> tuple:
    gens = _generators(support)
    n = len(gens)
    equations = [np.zeros((0, 2 * n), dtype=np.uint8)]
    for v in [REAL] + gens[1:]:
        L = _local_map(gens, v)
        if v in relaxed:
            continue
        if v in strict:
            equations.append(L)
            continue
        W = local_image(E, v)
        annihilator = f2.nullspace(W, 2 * square_class_width(v))
        equations.append(f2.matmul(annihilator, L))
    basis = f2.nullspace(np.vstack(equations), 2 * n)
    basis = f2.span_basis(basis, 2 * n)
    return gens, basis


@dataclass(frozen=True)
class DescentBasis:
    generators: tuple  # ((SquareClass, SquareClass), ...)
    dim: int
    support: tuple

    def to_json(self) -> dict:
        return {
            "d2": self.dim,
            "basis": [[a.representative, b.representative] for a, b in self.generators],
            "support": list(self.support),
        }


def _to_basis(gens: list, rows: np.ndarray) -> DescentBasis:
    n = len(gens)
    pairs = tuple((_class_of(r[:n], gens), _class_of(r[n:], gens)) for r in rows)
    return DescentBasis(pairs, len(pairs), tuple(gens[1:]))


def sel2(E: FullTorsionCurve) -> DescentBasis:
    gens, rows = _selmer_rows(E, E.bad_support)
    basis = _to_basis(gens, rows)
    logger.debug("Sel_2 of %s has dimension %d", E.roots, basis.dim)
    return basis


def selmer_contains(E: FullTorsionCurve, pair: tuple) -> bool:
    """Whether the class pair (a, b) lies in Sel_2(E)."""
    gens, rows = _selmer_rows(E, E.bad_support)
    n = len(gens)
    v = np.concatenate([_global_bits(pair[0], gens), _global_bits(pair[1], gens)])
    return f2.in_span(rows.reshape(-1, 2 * n), v)


@dataclass(frozen=True)
class SelmerSetup:
    T: tuple
    dim_strict: int
    dim_relaxed: int
    dim_vt: int
    d2: int

    def to_json(self) -> dict:
        return {
            "T": list(self.T),
            "dimStrict": self.dim_strict,
            "dimRelaxed": self.dim_relaxed,
            "dimVT": self.dim_vt,
            "d2": self.d2,
        }


def _finite(T: Iterable) -> list:
    return [v for v in T if v != REAL]


def localize(E: FullTorsionCurve, T: Iterable) -> int:
    """dim of loc_T(Sel_2(E)) inside the sum of the local images at T."""
    T = list(T)
    if not T:
        return 0
    support = set(E.bad_support) | set(_finite(T))
    gens, rows = _selmer_rows(E, support)
    if rows.shape[0] == 0:
        return 0
    L = np.vstack([_local_map(gens, v) for v in T])
    return f2.rank(f2.matmul(L, rows.T).T)


def relaxed_strict(E: FullTorsionCurve, T: Iterable) -> SelmerSetup:
    T = tuple(T)
    support = set(E.bad_support) | set(_finite(T))
    _, relaxed = _selmer_rows(E, support, relaxed=T)
    _, strict = _selmer_rows(E, support, strict=T)
    d2 = sel2(E).dim
    return SelmerSetup(T, strict.shape[0], relaxed.shape[0], localize(E, T), d2)


# =========================================================
# TWIST VERIFICATION
# =========================================================
@dataclass(frozen=True)
class TwistFormulaReport:
    d: int
    T: tuple
    t: int
    d2: int
    d2_twist: int
    dim_vt: int
    dd: int
    range_ok: bool
    parity_ok: bool
    envelope_ok: bool

    @property
    def passed(self) -> bool:
        return self.range_ok and self.parity_ok and self.envelope_ok

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "T": list(self.T),
            "t": self.t,
            "d2": self.d2,
            "d2Twist": self.d2_twist,
            "dimVT": self.dim_vt,
            "dd": self.dd,
            "passed": self.passed,
        }


def verify_twist_formula(E: FullTorsionCurve, d: int) -> TwistFormulaReport:
    """Check d_2(E^d) = d_2(E) - dim V_T + dd with dd in range and of the
    right parity, both sides computed by descent."""
    adm = admissible(E.curve, d)
    if isinstance(adm, Violation):
        raise NotAdmissible(adm.reason)
    d2 = sel2(E).dim
    d2_twist = sel2(twist_full(E, d)).dim
    dim_vt = localize(E, adm.T)
    t = sum(_h1f(p) for p in adm.T)
    dd = d2_twist - d2 + dim_vt
    envelope = selmer_envelope(E.curve, d, d2, dim_vt)
    return TwistFormulaReport(
        d=d,
        T=adm.T,
        t=t,
        d2=d2,
        d2_twist=d2_twist,
        dim_vt=dim_vt,
        dd=dd,
        range_ok=0 <= dd <= t - dim_vt,
        parity_ok=(dd - (t - dim_vt)) % 2 == 0,
        envelope_ok=d2_twist in envelope.possible and (envelope.exact is None or envelope.exact == d2_twist),
    )


# =========================================================
# TWIST CENSUS
# =========================================================
@dataclass
class SelmerCensus:
    X: int
    table: pd.DataFrame
    counts: dict = field(default_factory=dict)


def squarefree_discs(X: int) -> list:
    """Squarefree d != 0 with conductor(d) <= X, ordered by conductor then d."""
    out = []
    for n in range(1, X + 1):
        for d in (n, -n):
            if is_squarefree(d) and conductor(d) <= X:
                out.append(d)
    return sorted(out, key=lambda d: (conductor(d), d))


def selmer_census(E: FullTorsionCurve, X: int, include_trivial: bool = True) -> SelmerCensus:
    """d_2 of every twist with conductor <= X, and N_r(E, X) for each r."""
    rows = []
    for d in squarefree_discs(X):
        if d == 1 and not include_trivial:
            continue
        rows.append({"d": d, "conductor": conductor(d), "d2": sel2(twist_full(E, d)).dim})
    table = pd.DataFrame(rows, columns=["d", "conductor", "d2"])
    counts = {int(r): int(c) for r, c in table["d2"].value_counts().sort_index().items()}
    logger.info("census of %s up to X=%d: %s", E.roots, X, counts)
    return SelmerCensus(X, table, counts)
