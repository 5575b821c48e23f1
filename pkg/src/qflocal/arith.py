"""Exact p-adic scalar arithmetic: valuations, square classes, Hilbert symbols.

All inputs are integers or :class:`fractions.Fraction`; nothing here touches
floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from sympy import isprime


class ArithError(ValueError):
    """Invalid input to an arithmetic routine."""


class ZeroClassError(ArithError):
    """Zero has no finite order and no square class."""


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not isprime(p):
        raise ArithError(f"{p!r} is not a prime")


def _as_fraction(a) -> Fraction:
    if isinstance(a, Fraction):
        return a
    if isinstance(a, (int, Rational)):
        return Fraction(a)
    raise ArithError(f"expected an exact rational, got {type(a).__name__}")


def _vp_int(a: int, p: int) -> int:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def vp(a, p: int) -> int:
    """p-adic order of a nonzero rational."""
    _check_prime(p)
    a = _as_fraction(a)
    if a == 0:
        raise ZeroClassError("zero has no finite order")
    return _vp_int(a.numerator, p) - _vp_int(a.denominator, p)


def unit_part(a, p: int) -> Fraction:
    """Return ``a / p**vp(a)``."""
    a = _as_fraction(a)
    v = vp(a, p)
    return a / Fraction(p) ** v


def unit_residue(u, p: int, k: int) -> int:
    """Residue of a p-adic unit (given as a rational) modulo ``p**k``."""
    u = _as_fraction(u)
    mod = p**k
    num, den = u.numerator, u.denominator
    if num % p == 0 or den % p == 0:
        raise ArithError(f"{u} is not a {p}-adic unit")
    return num * pow(den, -1, mod) % mod


def legendre(a: int, p: int) -> int:
    """Legendre symbol for an odd prime p and a coprime to p."""
    _check_prime(p)
    if p == 2:
        raise ArithError("legendre symbol needs an odd prime")
    if a % p == 0:
        raise ArithError(f"{p} divides {a}")
    return 1 if pow(a % p, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue modulo the odd prime p."""
    _check_prime(p)
    if p == 2:
        raise ArithError("no non-residue unit class representative at p=2")
    d = 2
    while legendre(d, p) == 1:
        d += 1
    return d


@dataclass(frozen=True, order=True)
class UnitClass:
    """Class of a p-adic unit modulo unit squares.

    ``rep`` is 1 or the smallest non-residue for odd p, and 1, 3, 5 or 7
    for p = 2.
    """

    prime: int
    rep: int

    def __post_init__(self):
        if self.prime == 2:
            if self.rep not in (1, 3, 5, 7):
                raise ArithError(f"bad dyadic unit representative {self.rep}")
        elif self.rep not in (1, nonresidue(self.prime)):
            raise ArithError(f"bad unit representative {self.rep} at p={self.prime}")

    @property
    def is_square(self) -> bool:
        return self.rep == 1


@dataclass(frozen=True, order=True)
class SquareClass:
    """Class of a nonzero p-adic number modulo unit squares.

    Unlike square classes of the field, the valuation is kept exactly:
    ``value`` (``rep * p**val``) determines the class, and two p-adic
    integers share a class iff their quotient lies in the unit squares.
    """

    prime: int
    val: int
    unit: UnitClass

    @property
    def rep(self) -> int:
        return self.unit.rep

    @property
    def value(self) -> Fraction | int:
        if self.val >= 0:
            return self.unit.rep * self.prime**self.val
        return Fraction(self.unit.rep, self.prime ** (-self.val))

    def shift(self, k: int) -> "SquareClass":
        """Class of ``value * p**k``."""
        return SquareClass(self.prime, self.val + k, self.unit)

    def __str__(self):
        return f"{self.value}"


def unit_class(u, p: int) -> UnitClass:
    """Canonical class of a p-adic unit."""
    if p == 2:
        return UnitClass(2, unit_residue(u, 2, 3))
    r = unit_residue(u, p, 1)
    return UnitClass(p, 1 if legendre(r, p) == 1 else nonresidue(p))


def square_class(a, p: int) -> SquareClass:
    """Square class of a nonzero rational ``a`` in Q_p."""
    a = _as_fraction(a)
    if a == 0:
        raise ZeroClassError("zero has no square class")
    v = vp(a, p)
    return SquareClass(p, v, unit_class(a / Fraction(p) ** v, p))


def is_square(a, p: int, in_units: bool = False) -> bool:
    """Whether ``a`` is a square in Q_p (or a unit square, with ``in_units``)."""
    c = square_class(a, p)
    if in_units and c.val != 0:
        return False
    return c.val % 2 == 0 and c.unit.is_square


def _hilbert_classes(a: SquareClass, b: SquareClass) -> int:
    p = a.prime
    alpha, beta = a.val, b.val
    u, v = a.rep, b.rep
    if p != 2:
        eps = (p - 1) // 2
        sign = -1 if (alpha * beta * eps) % 2 else 1
        if beta % 2:
            sign *= legendre(u, p)
        if alpha % 2:
            sign *= legendre(v, p)
        return sign

    def e(x):
        return ((x - 1) // 2) % 2

    def w(x):
        return ((x * x - 1) // 8) % 2

    exponent = e(u) * e(v) + alpha * w(v) + beta * w(u)
    return -1 if exponent % 2 else 1


def hilbert(a, b, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero rationals."""
    _check_prime(p)
    return _hilbert_classes(square_class(a, p), square_class(b, p))


def sc_set(p: int) -> tuple[SquareClass, ...]:
    """Fixed representatives of the square classes of valuation 0 and 1."""
    _check_prime(p)
    if p == 2:
        reps = (1, 3, 5, 7, 2, 6, 10, 14)
    else:
        d = nonresidue(p)
        reps = (1, d, p, p * d)
    return tuple(square_class(r, p) for r in reps)


def unit_classes(p: int) -> tuple[UnitClass, ...]:
    if p == 2:
        return tuple(UnitClass(2, r) for r in (1, 3, 5, 7))
    return (UnitClass(p, 1), UnitClass(p, nonresidue(p)))
