"""Local conditions at each place of Q: splitting of Q(sqrt d), H^1_f
dimensions, local norm indices delta_v(E, d), Delta-parity descriptors and
twist admissibility."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .arith import REAL, Place, factor, hilbert, is_squarefree, kronecker
from .curve import Curve, ReductionType, bad_primes, local_two_torsion_dim, minimal_model, reduction_type
from .errors import BadReductionPrime, InvalidDescriptor, NotSquarefree, UnsupportedPlace

logger = logging.getLogger(__name__)

UNSUPPORTED = "Unsupported"

Delta = Union[int, str]


class Splitting(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class TwistDisc:
    d: int

    def __post_init__(self):
        if self.d == 0 or not is_squarefree(self.d):
            raise NotSquarefree(f"{self.d} is not a squarefree nonzero integer")

    @property
    def trivial(self) -> bool:
        return self.d == 1


@dataclass(frozen=True)
class PlaceBehavior:
    place: Place
    splitting: Splitting


def _disc(d) -> int:
    return TwistDisc(d.d if isinstance(d, TwistDisc) else int(d)).d


def place_behavior(d, v: Place) -> PlaceBehavior:
    d = _disc(d)
    if v == REAL:
        return PlaceBehavior(v, Splitting.SPLIT if d > 0 else Splitting.RAMIFIED)
    if v == 2:
        if d % 4 != 1:
            kind = Splitting.RAMIFIED
        else:
            kind = Splitting.SPLIT if d % 8 == 1 else Splitting.INERT
        return PlaceBehavior(v, kind)
    if d % v == 0:
        return PlaceBehavior(v, Splitting.RAMIFIED)
    return PlaceBehavior(v, Splitting.SPLIT if kronecker(d, v) == 1 else Splitting.INERT)


def conductor(d) -> int:
    """Absolute discriminant of Q(sqrt d)."""
    d = _disc(d)
    return abs(d) if d % 4 == 1 else 4 * abs(d)


# =========================================================
# LOCAL DIMENSIONS AND NORM INDICES
# =========================================================
def h1f_dim(E: Curve, v: Place) -> int:
    if v == REAL:
        return 1 if minimal_model(E).disc > 0 else 0
    dim = local_two_torsion_dim(E, v)
    return dim + 1 if v == 2 else dim


def delta_rule(E: Curve, d, v: Place) -> tuple:
    """(delta_v, rule tag) by the first matching local criterion."""
    d = _disc(d)
    M = minimal_model(E)
    splitting = place_behavior(d, v).splitting
    if splitting is Splitting.SPLIT:
        return 0, "split"
    if v == REAL:
        # (Delta, d)_R = 1 exactly when the real locus has two components
        if M.disc < 0:
            return 0, "real_connected"
        return (1 if hilbert(M.disc, d, REAL) == 1 else 0), "real_hilbert"
    red = reduction_type(M, v)
    if v != 2 and local_two_torsion_dim(M, v) == 0:
        return 0, "no_local_2_torsion"
    unramified = splitting is not Splitting.RAMIFIED
    if red.type is ReductionType.GOOD and unramified:
        return 0, "good_unramified"
    if red.type is ReductionType.GOOD and v != 2:
        return local_two_torsion_dim(M, v), "good_ramified"
    if red.type.multiplicative and unramified and red.ord_delta_min % 2:
        return 0, "mult_inert_odd"
    if red.type is ReductionType.MULT_SPLIT and v != 2:
        return 1, "mult_split_ramified"
    logger.debug("delta unsupported for %s at %s (d=%d, %s)", M.ainvs, v, d, red.type.value)
    return UNSUPPORTED, "unsupported"


def delta_v(E: Curve, d, v: Place) -> Delta:
    return delta_rule(E, d, v)[0]


def delta_hilbert_agreement(E: Curve, d, p: int) -> bool:
    """At a good odd ramified p with dim E(Q_p)[2] <= 1, check that
    delta_p = 1 exactly when (Delta_min, d)_p = -1."""
    d = _disc(d)
    M = minimal_model(E)
    if p == 2 or M.disc % p == 0:
        raise BadReductionPrime(f"{p} is not a good odd prime for {M.ainvs}")
    dim = local_two_torsion_dim(M, p)
    if d % p or dim == 2:
        raise UnsupportedPlace(p)
    return (delta_v(M, d, p) == 1) == (hilbert(M.disc, d, p) == -1)


@dataclass(frozen=True)
class NormIndexReport:
    entries: tuple  # ((place, delta, rule), ...)

    @property
    def total_parity(self) -> Optional[int]:
        if any(delta == UNSUPPORTED for _, delta, _ in self.entries):
            return None
        return sum(delta for _, delta, _ in self.entries) % 2

    def unsupported_places(self) -> list:
        return [v for v, delta, _ in self.entries if delta == UNSUPPORTED]

    def delta(self, v: Place) -> Delta:
        for place, delta, _ in self.entries:
            if place == v:
                return delta
        return 0

    def to_json(self) -> list:
        return [[v, delta] for v, delta, _ in self.entries]


def relevant_places(E: Curve, d) -> list:
    d = _disc(d)
    primes = {2} | set(bad_primes(E))
    if abs(d) > 1:
        primes |= set(factor(d).primes())
    return [REAL] + sorted(primes)


def norm_index_report(E: Curve, d) -> NormIndexReport:
    """delta_v over every place where it can be nonzero."""
    return NormIndexReport(tuple((v, *delta_rule(E, d, v)) for v in relevant_places(E, d)))


# =========================================================
# ADMISSIBILITY
# =========================================================
@dataclass(frozen=True)
class Admissible:
    T: tuple

    ok = True


@dataclass(frozen=True)
class Violation:
    reason: str

    ok = False


def admissible(E: Curve, d) -> Union[Admissible, Violation]:
    """Splitting hypotheses under which local conditions change only at T."""
    d = _disc(d)
    M = minimal_model(E)
    if d == 1:
        return Admissible(())
    if d % 8 != 1:
        return Violation(f"2 does not split: {d} is not 1 mod 8")
    if M.disc > 0 and d < 0:
        return Violation("real place with positive discriminant must split")
    for q in bad_primes(M):
        red = reduction_type(M, q)
        splitting = place_behavior(d, q).splitting
        if red.type is ReductionType.ADDITIVE and splitting is not Splitting.SPLIT:
            return Violation(f"additive place {q} must split")
        if red.type.multiplicative and red.ord_delta_min % 2 == 0 and splitting is not Splitting.SPLIT:
            return Violation(f"multiplicative place {q} with even ord must split")
        if red.type.multiplicative and splitting is Splitting.RAMIFIED:
            return Violation(f"multiplicative place {q} must be unramified")
    T = tuple(p for p in factor(d).primes() if local_two_torsion_dim(M, p) != 0)
    return Admissible(T)


# =========================================================
# DELTA-PARITY DESCRIPTORS
# =========================================================
class PlaceKind(str, Enum):
    REAL = "real"
    COMPLEX = "complex"
    FINITE = "finite"


class ParityFlag(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class PlaceDescriptor:
    """A place of some number field, described by its local data only."""

    kind: PlaceKind
    p: Optional[int] = None
    ramified: bool = False
    reduction: Optional[ReductionType] = None
    ord_delta: int = 0
    flag: Optional[ParityFlag] = field(default=None)

    def __post_init__(self):
        if self.kind is PlaceKind.FINITE and (self.p is None or self.reduction is None):
            raise InvalidDescriptor("finite descriptors need a residue characteristic and a reduction type")
        if self.flag is not None:
            derived = _derived_flag(self)
            if derived is not ParityFlag.UNKNOWN and derived is not self.flag:
                raise InvalidDescriptor(f"flag {self.flag.value} contradicts local data ({derived.value})")

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.kind is PlaceKind.FINITE:
            out.update(p=self.p, ramified=self.ramified, reduction=self.reduction.value, ordDelta=self.ord_delta)
        if self.flag is not None:
            out["flag"] = self.flag.value
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PlaceDescriptor":
        try:
            kind = PlaceKind(obj["kind"])
            reduction = obj.get("reduction")
            flag = obj.get("flag")
            return cls(
                kind=kind,
                p=obj.get("p"),
                ramified=bool(obj.get("ramified", False)),
                reduction=ReductionType(reduction) if reduction is not None else None,
                ord_delta=int(obj.get("ordDelta", 0)),
                flag=ParityFlag(flag) if flag is not None else None,
            )
        except (KeyError, ValueError) as exc:
            raise InvalidDescriptor(f"malformed place descriptor {obj!r}: {exc}") from exc


def _derived_flag(desc: PlaceDescriptor) -> ParityFlag:
    if desc.kind is PlaceKind.REAL:
        return ParityFlag.NO
    if desc.kind is PlaceKind.COMPLEX:
        return ParityFlag.YES  # every class is a norm, delta is always 0
    if desc.reduction.multiplicative:
        return ParityFlag.NO
    if desc.reduction is ReductionType.GOOD and desc.p != 2:
        return ParityFlag.YES
    return ParityFlag.UNKNOWN


def d_parity(desc: PlaceDescriptor) -> ParityFlag:
    if desc.flag is not None:
        return desc.flag
    return _derived_flag(desc)


def descriptors_for(E: Curve) -> list:
    M = minimal_model(E)
    out = [PlaceDescriptor(PlaceKind.REAL)]
    for q in bad_primes(M):
        red = reduction_type(M, q)
        out.append(PlaceDescriptor(PlaceKind.FINITE, p=q, reduction=red.type, ord_delta=red.ord_delta_min))
    return out
