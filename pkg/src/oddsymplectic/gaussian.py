"""Exact Gaussian-rational numbers: ``a + b*I`` with rational ``a``, ``b``.

This is the coefficient field of the whole package.  Values are immutable,
hashable, normalised by construction (``fractions.Fraction`` keeps itself in
lowest terms), and support the exact principal square root when one exists in
the field.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

__all__ = ["GaussianRational", "QLike", "to_gaussian", "fraction_sqrt"]

QLike = Union["GaussianRational", Fraction, int]


def fraction_sqrt(value: Fraction) -> Fraction | None:
    """Return the exact nonnegative square root of ``value`` or ``None``.

    ``None`` means ``value`` is negative or not a perfect square in **Q**.
    """
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn = math.isqrt(num)
    if rn * rn != num:
        return None
    rd = math.isqrt(den)
    if rd * rd != den:
        return None
    return Fraction(rn, rd)


class GaussianRational:
    """An element ``re + im*I`` of Q(i), with exact arithmetic."""

    __slots__ = ("re", "im")

    re: Fraction
    im: Fraction

    def __init__(self, re: QLike = 0, im: QLike = 0) -> None:
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("cannot combine a GaussianRational with an imaginary part")
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im)
            return
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("GaussianRational is immutable")

    # -- predicates ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_rational(self) -> bool:
        return not self.im

    def is_integer(self) -> bool:
        return not self.im and self.re.denominator == 1

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: QLike) -> "GaussianRational":
        o = to_gaussian(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: QLike) -> "GaussianRational":
        o = to_gaussian(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: QLike) -> "GaussianRational":
        return to_gaussian(other) - self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: QLike) -> "GaussianRational":
        o = to_gaussian(other)
        if not self.im and not o.im:
            return GaussianRational(self.re * o.re)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if not self.im:
            return GaussianRational(1 / self.re)
        norm = self.re * self.re + self.im * self.im
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other: QLike) -> "GaussianRational":
        return self * to_gaussian(other).inverse()

    def __rtruediv__(self, other: QLike) -> "GaussianRational":
        return to_gaussian(other) * self.inverse()

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int):
            raise TypeError("exponent must be an integer")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- square root --------------------------------------------------------

    def sqrt(self) -> "GaussianRational | None":
        """Exact principal square root in Q(i), or ``None`` if none exists.

        The principal root is the one with positive real part, or (when the
        real part vanishes) nonnegative imaginary part.
        """
        if not self:
            return ZERO
        if not self.im:
            root = fraction_sqrt(self.re)
            if root is not None:
                return GaussianRational(root)
            root = fraction_sqrt(-self.re)
            if root is not None:
                return GaussianRational(0, root)
            return None
        modulus = fraction_sqrt(self.re * self.re + self.im * self.im)
        if modulus is None:
            return None
        half = (self.re + modulus) / 2
        real_part = fraction_sqrt(half)
        if real_part is None or real_part == 0:
            return None
        imag_part = self.im / (2 * real_part)
        return GaussianRational(real_part, imag_part)

    # -- comparison / hashing / display --------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if self.im == 1:
            imag = "I"
        elif self.im == -1:
            imag = "-I"
        else:
            imag = f"{self.im}*I"
        if not self.re:
            return imag
        return f"{self.re}{imag}" if imag.startswith("-") else f"{self.re}+{imag}"


def to_gaussian(value: QLike) -> GaussianRational:
    """Coerce an int, Fraction, or GaussianRational to a GaussianRational."""
    if isinstance(value, GaussianRational):
        return value
    return GaussianRational(value)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
IMAG = GaussianRational(0, 1)
