"""Exceptions raised by the twistlab engine.

Everything derives from ``TwistlabError`` (a ``ValueError``) so callers that
only care about bad input can catch one type. Value-level outcomes such as
an unsupported local norm index are *not* exceptions.
"""


class TwistlabError(ValueError):
    """Base class for all engine errors."""


# ── arithmetic ───────────────────────────────────────────
class ZeroInput(TwistlabError):
    pass


class OutOfRange(TwistlabError):
    pass


class BothZero(TwistlabError):
    pass


class NotOddPrime(TwistlabError):
    pass


# ── curves ───────────────────────────────────────────────
class SingularModel(TwistlabError):
    pass


class NotSquarefree(TwistlabError):
    pass


class BadReductionPrime(TwistlabError):
    pass


class PrecisionExhausted(TwistlabError):
    pass


# ── parity / local data ──────────────────────────────────
class UnsupportedPlace(TwistlabError):
    def __init__(self, place):
        super().__init__(f"local norm index unsupported at place {place}")
        self.place = place


class NotAdmissible(TwistlabError):
    pass


class OutOfDomain(TwistlabError):
    pass


class UnresolvedPlace(TwistlabError):
    pass


class InvalidDescriptor(TwistlabError):
    pass


# ── twist search ─────────────────────────────────────────
class WrongTorsion(TwistlabError):
    pass


class HypothesesFail(TwistlabError):
    pass


class TwistNotFound(TwistlabError):
    pass


class FamilyCheckFailed(TwistlabError):
    def __init__(self, t0, reason):
        super().__init__(f"family check failed for t0={t0}: {reason}; try another t0")
        self.t0 = t0


# ── group algebra ────────────────────────────────────────
class InvalidAction(TwistlabError):
    pass
