"""Floating values with an unbounded base-2 exponent.

Quantities like the deep-generation circulation peaks reach magnitudes around
2**(2**11) and the weak-pairing bounds drop below 2**(-2**8); both overflow or
underflow IEEE doubles long before the interesting generations.  ``ExtScalar``
keeps a 53-bit float mantissa in [1, 2) next to a Python-int exponent, which
preserves a bit over 50 bits of relative precision at any magnitude.

Values constructed from exact rationals are correctly rounded; they are exact
whenever the numerator and denominator fit in the mantissa (the common case
for the dyadic inputs in this package).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dyadic import DyadicScalar

_MANT_BITS = 53


def _log2_fraction(f: Fraction) -> float:
    """Accurate float log2 of a positive rational with huge numerator/denominator."""
    if f <= 0:
        raise ValueError("log2 requires a positive value")
    p, q = f.numerator, f.denominator
    e = p.bit_length() - q.bit_length()
    # p/q = 2**e * r with r in [0.5, 2); extract r with 64 guard bits
    if e >= 0:
        r = (p << 64) // (q << e) if e else (p << 64) // q
    else:
        r = ((p << -e) << 64) // q
    return e + math.log2(r * 2.0 ** -64)


@dataclass(frozen=True)
class ExtScalar:
    """sign * mantissa * 2**exp2 with mantissa in [1, 2) (mantissa 0 only for zero)."""

    sign: int
    mantissa: float
    exp2: int

    ZERO: "ExtScalar" = None  # set below

    def __post_init__(self):
        if self.sign == 0:
            if self.mantissa != 0.0 or self.exp2 != 0:
                raise ValueError("zero must be (0, 0.0, 0)")
        else:
            if self.sign not in (-1, 1):
                raise ValueError("sign must be -1, 0 or +1")
            if not (1.0 <= self.mantissa < 2.0):
                raise ValueError(f"mantissa {self.mantissa} outside [1, 2)")

    # -- constructors -------------------------------------------------------

    @classmethod
    def _build(cls, sign: int, mantissa: float, exp2: int) -> "ExtScalar":
        if sign == 0 or mantissa == 0.0:
            return cls(0, 0.0, 0)
        m, e = math.frexp(mantissa)  # m in [0.5, 1)
        return cls(sign, m * 2.0, exp2 + e - 1)

    @classmethod
    def from_float(cls, x: float) -> "ExtScalar":
        if x == 0.0:
            return cls(0, 0.0, 0)
        if not math.isfinite(x):
            raise ValueError("ExtScalar requires finite input")
        sign = 1 if x > 0 else -1
        m, e = math.frexp(abs(x))
        return cls(sign, m * 2.0, e - 1)

    @classmethod
    def from_int(cls, n: int) -> "ExtScalar":
        return cls.from_fraction(Fraction(n))

    @classmethod
    def from_fraction(cls, f: Fraction) -> "ExtScalar":
        if f == 0:
            return cls(0, 0.0, 0)
        sign = 1 if f > 0 else -1
        p, q = abs(f.numerator), f.denominator
        e = p.bit_length() - q.bit_length()
        # mantissa = p/q * 2**-e in [0.5, 2); round with 2 guard-word precision
        num = p << 64 if e <= 0 else p << 64
        den = q << e if e > 0 else q
        if e < 0:
            num = p << (64 - e)
        m = (num // den) * 2.0 ** -64
        return cls._build(sign, m, e)

    @classmethod
    def from_dyadic(cls, d: DyadicScalar) -> "ExtScalar":
        if d.is_zero():
            return cls(0, 0.0, 0)
        sign = d.sign
        m = abs(d.mantissa)
        bits = m.bit_length()
        if bits <= _MANT_BITS:
            return cls._build(sign, float(m), -d.exp2)
        top = m >> (bits - 64)
        return cls._build(sign, top * 2.0 ** -64, bits - d.exp2)

    @classmethod
    def pow2(cls, e: int) -> "ExtScalar":
        return cls(1, 1.0, e)

    # -- conversions ---------------------------------------------------------

    def to_float(self) -> float:
        """Lossy; raises OverflowError outside the double range."""
        if self.sign == 0:
            return 0.0
        if self.exp2 > 1100:
            raise OverflowError("ExtScalar exponent too large for float")
        if self.exp2 < -1100:
            return 0.0 if self.sign > 0 else -0.0
        return self.sign * math.ldexp(self.mantissa, self.exp2)

    def log2(self) -> float:
        """log2 of the absolute value (exponent folded in; requires nonzero)."""
        if self.sign == 0:
            raise ValueError("log2 of zero")
        return self.exp2 + math.log2(self.mantissa)

    # -- arithmetic ------------------------------------------------------------

    def __neg__(self) -> "ExtScalar":
        if self.sign == 0:
            return self
        return ExtScalar(-self.sign, self.mantissa, self.exp2)

    def __abs__(self) -> "ExtScalar":
        if self.sign < 0:
            return -self
        return self

    def __mul__(self, other: "ExtScalar") -> "ExtScalar":
        if self.sign == 0 or other.sign == 0:
            return ExtScalar(0, 0.0, 0)
        return ExtScalar._build(
            self.sign * other.sign, self.mantissa * other.mantissa, self.exp2 + other.exp2
        )

    def __truediv__(self, other: "ExtScalar") -> "ExtScalar":
        if other.sign == 0:
            raise ZeroDivisionError("ExtScalar division by zero")
        if self.sign == 0:
            return self
        return ExtScalar._build(
            self.sign * other.sign, self.mantissa / other.mantissa, self.exp2 - other.exp2
        )

    def __add__(self, other: "ExtScalar") -> "ExtScalar":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.exp2 >= other.exp2 else (other, self)
        shift = hi.exp2 - lo.exp2
        if shift > 120:
            return hi
        v = hi.sign * hi.mantissa + lo.sign * math.ldexp(lo.mantissa, -shift)
        if v == 0.0:
            return ExtScalar(0, 0.0, 0)
        sign = 1 if v > 0 else -1
        return ExtScalar._build(sign, abs(v), hi.exp2)

    def __sub__(self, other: "ExtScalar") -> "ExtScalar":
        return self + (-other)

    def sqrt(self) -> "ExtScalar":
        if self.sign < 0:
            raise ValueError("sqrt of a negative value")
        if self.sign == 0:
            return self
        e, m = self.exp2, self.mantissa
        if e % 2:
            e -= 1
            m *= 2.0
        return ExtScalar._build(1, math.sqrt(m), e // 2)

    def pow_fraction(self, alpha: Fraction) -> "ExtScalar":
        """|self| ** alpha for positive self, via exact exponent bookkeeping."""
        if self.sign <= 0:
            raise ValueError("pow_fraction requires a positive base")
        if alpha == 0:
            return ExtScalar(1, 1.0, 0)
        t = alpha * self.exp2  # exact rational
        e_int = math.floor(t)
        frac = float(t - e_int)
        m = self.mantissa ** float(alpha) * 2.0 ** frac
        return ExtScalar._build(1, m, int(e_int))

    # -- comparisons ------------------------------------------------------------

    def _cmp(self, other: "ExtScalar") -> int:
        if self.sign != other.sign:
            return (self.sign > other.sign) - (self.sign < other.sign)
        if self.sign == 0:
            return 0
        if self.exp2 != other.exp2:
            c = (self.exp2 > other.exp2) - (self.exp2 < other.exp2)
        else:
            c = (self.mantissa > other.mantissa) - (self.mantissa < other.mantissa)
        return c if self.sign > 0 else -c

    def __lt__(self, other: "ExtScalar") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "ExtScalar") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "ExtScalar") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "ExtScalar") -> bool:
        return self._cmp(other) >= 0

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        s = "-" if self.sign < 0 else "+"
        return f"{s}{self.mantissa:.15g}*2^{self.exp2}"


ExtScalar.ZERO = ExtScalar(0, 0.0, 0)


def sqrt_fraction(f: Fraction) -> ExtScalar:
    """Square root of a nonnegative rational as an ExtScalar."""
    if f < 0:
        raise ValueError("sqrt of a negative rational")
    return ExtScalar.from_fraction(f).sqrt()


def log2_fraction(f: Fraction) -> float:
    return _log2_fraction(f)
