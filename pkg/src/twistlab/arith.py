"""Exact integer, modular and symbol arithmetic.

Rationals are accepted anywhere a "nonzero rational" is expected and are
normalised through ``fractions.Fraction``; primes and factorizations come
from sympy.ntheory.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import factorint, isprime
from sympy.functions.combinatorial.numbers import jacobi_symbol, legendre_symbol

from .config import FACTOR_BOUND
from .errors import BothZero, OutOfRange, TwistlabError, ZeroInput

REAL = "Real"

Place = Union[int, str]
Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple  # ((prime, exponent), ...) with primes increasing

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p**e
        return n

    def primes(self) -> list:
        return [p for p, _ in self.factors]


@dataclass(frozen=True)
class SquareClass:
    """A class in Q^x/(Q^x)^2, stored by its squarefree representative."""

    representative: int

    def __post_init__(self):
        if self.representative == 0 or not is_squarefree(self.representative):
            raise TwistlabError(f"{self.representative} is not a squarefree nonzero integer")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return squarefree_part(self.representative * other.representative)


def factor(n: int) -> Factorization:
    if n == 0:
        raise ZeroInput("cannot factor 0")
    if abs(n) > FACTOR_BOUND:
        raise OutOfRange(f"|{n}| exceeds the factorization bound 2^96")
    sign = 1 if n > 0 else -1
    # factorint does trial division first, then Pollard rho / p-1
    return Factorization(sign, tuple(sorted(factorint(abs(n)).items())))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factor(n).factors)


def squarefree_part(n: int) -> SquareClass:
    if n == 0:
        raise ZeroInput("0 has no square class")
    f = factor(n)
    rep = f.sign
    for p, e in f.factors:
        if e % 2:
            rep *= p
    return SquareClass(rep)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extending Jacobi to even and negative n."""
    if a == 0 and n == 0:
        raise BothZero("kronecker(0, 0) is undefined")
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(a % n, n))


def _as_fraction(a: Rational) -> Fraction:
    a = Fraction(a)
    if a == 0:
        raise ZeroInput("expected a nonzero rational")
    return a


def _integral_class(a: Rational) -> int:
    # num/den and num*den differ by the square den^2
    a = _as_fraction(a)
    return a.numerator * a.denominator


def valuation(a: Rational, p: int) -> int:
    a = _as_fraction(a)
    return _int_valuation(a.numerator, p) - _int_valuation(a.denominator, p)


def _int_valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _split_unit(n: int, p: int) -> tuple:
    k = _int_valuation(n, p)
    return k, n // p**k


def _check_place(v: Place) -> None:
    if v != REAL and not (isinstance(v, int) and isprime(v)):
        raise TwistlabError(f"{v!r} is not a place of Q")


def hilbert(a: Rational, b: Rational, v: Place) -> int:
    """Hilbert symbol (a, b)_v: +1 iff b is a norm from Q_v(sqrt(a))."""
    _check_place(v)
    a, b = _integral_class(a), _integral_class(b)
    if v == REAL:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split_unit(a, v)
    beta, w = _split_unit(b, v)
    if v == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * (v - 1) // 2) % 2 else 1
    if beta % 2:
        s *= int(legendre_symbol(u % v, v))
    if alpha % 2:
        s *= int(legendre_symbol(w % v, v))
    return s


def square_class_bits(a: Rational, v: Place) -> tuple:
    """Coordinates of a in Q_v^x/(Q_v^x)^2 over F_2.

    Real: (sign,). Odd p: (ord parity, nonresidue). p = 2: (ord parity,
    class of -1, class of 5).
    """
    a = _integral_class(a)
    if v == REAL:
        return (1 if a < 0 else 0,)
    k, u = _split_unit(a, v)
    if v == 2:
        minus = 1 if u % 4 == 3 else 0
        five = 1 if (-u if minus else u) % 8 == 5 else 0
        return (k % 2, minus, five)
    return (k % 2, 0 if int(legendre_symbol(u % v, v)) == 1 else 1)


def square_class_width(v: Place) -> int:
    if v == REAL:
        return 1
    return 3 if v == 2 else 2


def is_local_square(a: Rational, v: Place) -> bool:
    return not any(square_class_bits(a, v))
