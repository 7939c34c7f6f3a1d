"""F_2[G]-modules for G cyclic of odd prime order p.

F_2[G] = F_2[X]/(X^p - 1) splits as F_2 times the fields F_2[X]/pi(X) for
the irreducible factors pi of (X^p - 1)/(X - 1).  A module is given by the
matrix A of a generator; the multiplicity of the simple module attached to
pi is dim ker pi(A) / deg pi.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf

from . import f2
from .errors import InvalidAction, NotOddPrime


def poly_name(coeffs: tuple) -> str:
    """x^2+x+1 style name of an F_2 polynomial given leading coefficient first."""
    deg = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        k = deg - i
        terms.append("1" if k == 0 else "x" if k == 1 else f"x^{k}")
    return "+".join(terms) or "0"


@dataclass(frozen=True)
class CyclicGroupAlgebra:
    p: int
    factors: tuple  # irreducible factors of (X^p - 1)/(X - 1), leading first

    @property
    def simple_dims(self) -> list:
        return [len(f) - 1 for f in self.factors]

    def to_json(self) -> dict:
        return {"p": self.p, "simpleDims": self.simple_dims, "factors": [poly_name(f) for f in self.factors]}


def group_algebra(p: int) -> CyclicGroupAlgebra:
    if p == 2 or not isprime(p):
        raise NotOddPrime(f"{p} is not an odd prime")
    xp1 = [1] + [0] * (p - 1) + [1]  # X^p + 1 = X^p - 1 over F_2
    _, factors = gf_factor_sqf(xp1, 2, ZZ)
    nontrivial = sorted(tuple(int(c) for c in f) for f in factors if len(f) > 2)
    return CyclicGroupAlgebra(p, tuple(nontrivial))


@dataclass(frozen=True, eq=False)
class GModule:
    p: int
    action: np.ndarray

    @property
    def dim(self) -> int:
        return self.action.shape[0]

    @classmethod
    def from_rows(cls, p: int, rows: list) -> "GModule":
        """Parse row bitstrings such as ["010", "001", "100"]."""
        matrix = [[int(ch) for ch in row] for row in rows]
        if any(len(r) != len(matrix) for r in matrix):
            raise InvalidAction("action matrix must be square")
        return cls(p, f2.as_f2(matrix, len(matrix)))

    def to_rows(self) -> list:
        return ["".join(str(int(b)) for b in row) for row in self.action]


def trivial_module(p: int, n: int) -> GModule:
    return GModule(p, np.eye(n, dtype=np.uint8))


def regular_module(p: int) -> GModule:
    """F_2[G] with the generator acting by cyclic shift."""
    return GModule(p, np.roll(np.eye(p, dtype=np.uint8), 1, axis=0))


def simple_module(p: int, factor: tuple) -> GModule:
    """F_2[X]/pi(X) with X acting by its companion matrix."""
    k = len(factor) - 1
    C = np.zeros((k, k), dtype=np.uint8)
    C[1:, :-1] = np.eye(k - 1, dtype=np.uint8)
    C[:, -1] = [factor[k - i] for i in range(k)]
    return GModule(p, C)


def direct_sum(B: GModule, C: GModule) -> GModule:
    if B.p != C.p:
        raise InvalidAction(f"cannot add modules for groups of order {B.p} and {C.p}")
    n, m = B.dim, C.dim
    A = np.zeros((n + m, n + m), dtype=np.uint8)
    A[:n, :n] = B.action
    A[n:, n:] = C.action
    return GModule(B.p, A)


def _poly_at(coeffs: tuple, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    result = np.zeros((n, n), dtype=np.uint8)
    identity = np.eye(n, dtype=np.uint8)
    for c in coeffs:
        result = f2.matmul(result, A)
        if c:
            result ^= identity
    return result


@dataclass(frozen=True)
class ModuleSplit:
    fixed_dim: int
    new_dim: int
    multiplicities: dict  # poly name -> d_k

    def to_json(self) -> dict:
        return {"fixedDim": self.fixed_dim, "newDim": self.new_dim, "multiplicities": dict(self.multiplicities)}


def split_module(B: GModule) -> ModuleSplit:
    A = B.action
    n = B.dim
    if not np.array_equal(f2.matpow(A, B.p), np.eye(n, dtype=np.uint8)):
        raise InvalidAction(f"generator action does not satisfy A^{B.p} = I")
    fixed = n - f2.rank(A ^ np.eye(n, dtype=np.uint8))
    mult = {}
    for factor in group_algebra(B.p).factors:
        kernel = n - f2.rank(_poly_at(factor, A))
        mult[poly_name(factor)] = kernel // (len(factor) - 1)
    return ModuleSplit(fixed, n - fixed, mult)


class StabilityVerdict(str, Enum):
    RANK_STABLE = "RankStable"
    INCONCLUSIVE = "Inconclusive"


def rank_stability(multiplicities: dict) -> StabilityVerdict:
    """Rank over L equals rank over K when some simple module is absent."""
    if not multiplicities or any(v == 0 for v in multiplicities.values()):
        return StabilityVerdict.RANK_STABLE
    return StabilityVerdict.INCONCLUSIVE
