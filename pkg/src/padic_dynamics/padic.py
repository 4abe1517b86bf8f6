"""Exact rationals with p-adic valuations, and residues modulo p^n.

Exact rationals are plain :class:`fractions.Fraction` values. Valuations of
zero are reported as :data:`INF` (``math.inf``), which compares correctly
against ordinary integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import NonUnitDenominator, NotInvertible

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class PrimeContext:
    """The prime ``p`` and the deepest ball level any computation may use."""

    p: int
    max_level: int = 4

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p!r}")
        if self.max_level < 3:
            raise ValueError("max_level must be at least 3")

    def modulus(self, n: int) -> int:
        return self.p**n


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def int_valuation(n: int, p: int):
    """v_p of an integer; INF for 0."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, ctx_or_p) -> int | float:
    """v_p(x) = v_p(num) - v_p(den), or INF when x == 0."""
    p = ctx_or_p.p if isinstance(ctx_or_p, PrimeContext) else ctx_or_p
    x = as_fraction(x)
    if x == 0:
        return INF
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


@dataclass(frozen=True)
class Residue:
    """An element of Z/p^level Z, always stored reduced into [0, p^level)."""

    p: int
    level: int
    value: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("residue level must be >= 1")
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p**self.level

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if (other.p, other.level) != (self.p, self.level):
                raise ValueError("residues live in different rings")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.p, self.level, self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.p, self.level, self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.p, self.level, o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.p, self.level, self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(self.p, self.level, -self.value)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p}^{self.level})"


def inv_mod(r: Residue) -> Residue:
    """Inverse of a unit residue modulo p^level."""
    if r.value % r.p == 0:
        raise NotInvertible(f"{r.value} is not a unit modulo {r.p}^{r.level}")
    return Residue(r.p, r.level, pow(r.value, -1, r.modulus))


def to_residue(x, n: int, ctx_or_p) -> Residue:
    """Reduce a rational with p-unit denominator modulo p^n."""
    p = ctx_or_p.p if isinstance(ctx_or_p, PrimeContext) else ctx_or_p
    x = as_fraction(x)
    if x.denominator % p == 0:
        raise NonUnitDenominator(f"{x} has denominator divisible by {p}")
    m = p**n
    return Residue(p, n, x.numerator * pow(x.denominator, -1, m))
