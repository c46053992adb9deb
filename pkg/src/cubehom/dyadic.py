"""Exact rationals of the form m / 2**k."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True, order=False)
class DyadicSum:
    """numerator / 2**exponent in canonical form (odd numerator or zero with exponent 0)."""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        m, k = self.numerator, self.exponent
        if k < 0:
            m, k = m << -k, 0
        if m == 0:
            k = 0
        else:
            tz = (m & -m).bit_length() - 1
            shift = min(tz, k)
            m, k = m >> shift, k - shift
        object.__setattr__(self, "numerator", m)
        object.__setattr__(self, "exponent", k)

    @classmethod
    def pow2(cls, e: int) -> "DyadicSum":
        """2**e for any integer e."""
        return cls(1, -e)

    @classmethod
    def coerce(cls, x: Union["DyadicSum", int]) -> "DyadicSum":
        if isinstance(x, DyadicSum):
            return x
        if isinstance(x, int):
            return cls(x)
        raise TypeError(f"cannot make a dyadic rational from {type(x).__name__}")

    def __add__(self, other):
        other = DyadicSum.coerce(other)
        k = max(self.exponent, other.exponent)
        return DyadicSum(
            (self.numerator << (k - self.exponent)) + (other.numerator << (k - other.exponent)), k
        )

    __radd__ = __add__

    def __neg__(self):
        return DyadicSum(-self.numerator, self.exponent)

    def __sub__(self, other):
        return self + (-DyadicSum.coerce(other))

    def __rsub__(self, other):
        return DyadicSum.coerce(other) - self

    def __mul__(self, other):
        other = DyadicSum.coerce(other)
        return DyadicSum(self.numerator * other.numerator, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not dyadic in general")
        return DyadicSum(self.numerator ** n, self.exponent * n)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __eq__(self, other):
        if isinstance(other, (int, DyadicSum)):
            other = DyadicSum.coerce(other)
            return (self.numerator, self.exponent) == (other.numerator, other.exponent)
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.numerator, self.exponent))

    def __lt__(self, other):
        return self.to_fraction() < DyadicSum.coerce(other).to_fraction()

    def __le__(self, other):
        return self.to_fraction() <= DyadicSum.coerce(other).to_fraction()

    def __gt__(self, other):
        return self.to_fraction() > DyadicSum.coerce(other).to_fraction()

    def __ge__(self, other):
        return self.to_fraction() >= DyadicSum.coerce(other).to_fraction()

    def __float__(self):
        return float(self.to_fraction())

    def is_integer(self) -> bool:
        return self.exponent == 0

    def __int__(self):
        if self.exponent:
            raise ValueError(f"{self} is not an integer")
        return self.numerator

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"

    @classmethod
    def parse(cls, s: str) -> "DyadicSum":
        num, _, exp = s.partition("/2^")
        return cls(int(num), int(exp or 0))


ZERO = DyadicSum(0)
ONE = DyadicSum(1)
