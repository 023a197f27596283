"""Exact scalars: rationals, Gaussian rationals and dyadic bounds.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  Gaussian rationals are stored as ``(x + y*i) / den`` over a
single positive denominator with ``gcd(x, y, den) == 1``, which keeps one gcd
per operation instead of two.  Irrational magnitudes (square roots, moduli)
are only ever produced as a pair of dyadic bounds, never rounded to nearest.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
Scalar = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """An element of Q(i), immutable and hashable."""

    __slots__ = ("_x", "_y", "_d")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
        self._x = re.numerator * (d // re.denominator)
        self._y = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _raw(cls, x: int, y: int, d: int) -> "GaussianRational":
        # d > 0 is the caller's responsibility
        g = math.gcd(x, y, d)
        obj = object.__new__(cls)
        if g != 1:
            x //= g
            y //= g
            d //= g
        obj._x, obj._y, obj._d = x, y, d
        return obj

    @classmethod
    def coerce(cls, value: Scalar) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int):
            obj = object.__new__(cls)
            obj._x, obj._y, obj._d = value, 0, 1
            return obj
        if isinstance(value, Fraction):
            obj = object.__new__(cls)
            obj._x, obj._y, obj._d = value.numerator, 0, value.denominator
            return obj
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    # -- components -------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._x, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._y, self._d)

    @property
    def parts(self) -> tuple[int, int, int]:
        """``(x, y, den)`` with value ``(x + y*i) / den``."""
        return self._x, self._y, self._d

    def is_zero(self) -> bool:
        return self._x == 0 and self._y == 0

    def is_real(self) -> bool:
        return self._y == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = GaussianRational.coerce(other)
        x1, y1, d1 = self._x, self._y, self._d
        x2, y2, d2 = other._x, other._y, other._d
        if d1 == d2:
            return GaussianRational._raw(x1 + x2, y1 + y2, d1)
        return GaussianRational._raw(x1 * d2 + x2 * d1, y1 * d2 + y2 * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(GaussianRational)
        obj._x, obj._y, obj._d = -self._x, -self._y, self._d
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = GaussianRational.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, int):
                return GaussianRational._raw(self._x * other, self._y * other, self._d)
            if not isinstance(other, Fraction):
                return NotImplemented
            other = GaussianRational.coerce(other)
        x1, y1, d1 = self._x, self._y, self._d
        x2, y2, d2 = other._x, other._y, other._d
        if y2 == 0:
            return GaussianRational._raw(x1 * x2, y1 * x2, d1 * d2)
        if y1 == 0:
            return GaussianRational._raw(x1 * x2, x1 * y2, d1 * d2)
        return GaussianRational._raw(x1 * x2 - y1 * y2, x1 * y2 + y1 * x2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        x, y, d = self._x, self._y, self._d
        n = x * x + y * y
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        # 1 / ((x + iy)/d) = d (x - iy) / (x^2 + y^2)
        return GaussianRational._raw(d * x, -d * y, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, int):
                if other == 0:
                    raise ZeroDivisionError("division by zero")
                if other < 0:
                    return GaussianRational._raw(-self._x, -self._y, -self._d * other)
                return GaussianRational._raw(self._x, self._y, self._d * other)
            if not isinstance(other, Fraction):
                return NotImplemented
            other = GaussianRational.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        return gauss_pow(self, k)

    def conjugate(self) -> "GaussianRational":
        obj = object.__new__(GaussianRational)
        obj._x, obj._y, obj._d = self._x, -self._y, self._d
        return obj

    conj = conjugate

    def norm_sq(self) -> Fraction:
        return Fraction(self._x * self._x + self._y * self._y, self._d * self._d)

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._x == other._x and self._y == other._y and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._y == 0 and Fraction(self._x, self._d) == other
        return NotImplemented

    def __hash__(self):
        if self._y == 0:
            return hash(Fraction(self._x, self._d))
        return hash((self._x, self._y, self._d))

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_gaussian(self)!r})"

    def __str__(self):
        return format_gaussian(self)


I = GaussianRational(0, 1)
ZERO = GaussianRational(0)
ONE = GaussianRational(1)


@dataclass(frozen=True)
class Dyadic:
    """``mantissa * 2**exponent`` with an odd mantissa (or the canonical zero ``0*2^0``)."""

    mantissa: int
    exponent: int = 0

    def __post_init__(self):
        m, e = self.mantissa, self.exponent
        if m == 0:
            e = 0
        else:
            tz = (m & -m).bit_length() - 1
            m >>= tz
            e += tz
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def from_scaled(cls, n: int, scale: int) -> "Dyadic":
        """The value ``n / 2**scale``."""
        return cls(n, -scale)

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __lt__(self, other):
        return self.to_fraction() < _as_fraction(other)

    def __le__(self, other):
        return self.to_fraction() <= _as_fraction(other)

    def __gt__(self, other):
        return self.to_fraction() > _as_fraction(other)

    def __ge__(self, other):
        return self.to_fraction() >= _as_fraction(other)

    def __sub__(self, other):
        return self.to_fraction() - _as_fraction(other)

    def __str__(self):
        return f"{self.mantissa}*2^{self.exponent}"


def _as_fraction(v) -> Fraction:
    return v.to_fraction() if isinstance(v, Dyadic) else Fraction(v)


# -- operations ----------------------------------------------------------

def norm_sq(z: Scalar) -> Fraction:
    """``|z|**2`` as an exact rational."""
    return GaussianRational.coerce(z).norm_sq()


def gauss_pow(z: Scalar, k: int) -> GaussianRational:
    """Exact ``z**k`` by repeated squaring; ``z**0 == 1`` including ``z == 0``."""
    z = GaussianRational.coerce(z)
    if k < 0:
        return gauss_pow(z.inverse(), -k)
    result = ONE
    base = z
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def iroot(n: int, k: int) -> int:
    """Floor of the real ``k``-th root of ``n >= 0``."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0, k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)  # above the root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def sqrt_bounds(q: Fraction | int, t: int) -> tuple[Dyadic, Dyadic]:
    """Dyadic ``lo <= sqrt(q) <= hi`` with ``hi - lo <= 2**-t``."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("sqrt_bounds of a negative number")
    s = max(t, 0)
    scaled = q.numerator * (1 << (2 * s))
    floor_scaled = scaled // q.denominator
    m = math.isqrt(floor_scaled)
    lo = Dyadic.from_scaled(m, s)
    if m * m * q.denominator == scaled:
        return lo, lo
    return lo, Dyadic.from_scaled(m + 1, s)


def _magnitude_bits(q: Fraction) -> int:
    """Rough ``log2 q`` (within 1) for ``q > 0``."""
    return q.numerator.bit_length() - q.denominator.bit_length()


def sqrt_lower(q: Fraction, rel_bits: int = 32) -> Fraction:
    """Rational lower bound on ``sqrt(q)`` with about ``rel_bits`` correct bits."""
    if q <= 0:
        return Fraction(0)
    t = rel_bits + max(0, -_magnitude_bits(q) // 2 + 1)
    return sqrt_bounds(q, t)[0].to_fraction()


def sqrt_upper(q: Fraction, rel_bits: int = 32) -> Fraction:
    """Rational upper bound on ``sqrt(q)`` with about ``rel_bits`` correct bits."""
    if q <= 0:
        return Fraction(0)
    t = rel_bits + max(0, -_magnitude_bits(q) // 2 + 1)
    return sqrt_bounds(q, t)[1].to_fraction()


def abs_bounds(z: Scalar, t: int) -> tuple[Dyadic, Dyadic]:
    """Dyadic ``lo <= |z| <= hi`` with ``hi - lo <= 2**-t``."""
    return sqrt_bounds(norm_sq(z), t)


def abs_lower(z: Scalar, rel_bits: int = 32) -> Fraction:
    return sqrt_lower(norm_sq(z), rel_bits)


def abs_upper(z: Scalar, rel_bits: int = 32) -> Fraction:
    return sqrt_upper(norm_sq(z), rel_bits)


def dyadic_floor_scaled(q: Fraction | int, t: int) -> int:
    """``floor(q * 2**t)``, rounding toward minus infinity."""
    q = Fraction(q)
    if t >= 0:
        return (q.numerator << t) // q.denominator
    return q.numerator // (q.denominator << -t)


def round_dyadic(z: GaussianRational, bits: int) -> GaussianRational:
    """Round both components to the grid ``2**-bits``; the error modulus is below ``2**-bits``."""
    x, y, d = z.parts
    if d == 1 or (d & (d - 1) == 0 and d.bit_length() - 1 <= bits):
        return z
    shift = 1 << bits
    half = d // 2
    rx = (x * shift + half) // d
    ry = (y * shift + half) // d
    return GaussianRational._raw(rx, ry, shift)


def floor_log2(q: Fraction) -> int:
    """Largest ``e`` with ``2**e <= q`` for ``q > 0``."""
    if q <= 0:
        raise ValueError("floor_log2 needs q > 0")
    e = _magnitude_bits(q)
    if Fraction(2) ** e > q:
        e -= 1
    elif Fraction(2) ** (e + 1) <= q:
        e += 1
    return e


def ceil_log2(q: Fraction) -> int:
    """Smallest ``e`` with ``2**e >= q`` for ``q > 0``."""
    e = floor_log2(q)
    return e if Fraction(2) ** e == q else e + 1


# -- text formats --------------------------------------------------------

_RAT_RE = re.compile(r"^\s*([+-]?)\s*(\d+)(?:\s*/\s*(\d+))?\s*$")
_TERM_RE = re.compile(
    r"([+-]?)\s*(?:(\d+)(?:\s*/\s*(\d+))?)?\s*(\*?\s*i)?", re.ASCII
)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (optional sign)."""
    from .errors import ParseError

    m = _RAT_RE.match(text)
    if not m:
        raise ParseError(f"not a rational literal: {text!r}")
    sign, p, q = m.groups()
    if q is not None and int(q) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    value = Fraction(int(p), int(q) if q else 1)
    return -value if sign == "-" else value


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``"p/q+r/s*i"`` and its variants (``"i"``, ``"-3*i"``, ``"2"``, ``"1/2-i"``)."""
    from .errors import ParseError

    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty Gaussian rational literal")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    pos = 0
    re_part = Fraction(0)
    im_part = Fraction(0)
    seen_re = seen_im = False
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"not a Gaussian rational literal: {text!r}")
        sign, p, q, imag = m.groups()
        if pos > 0 and not sign:
            raise ParseError(f"missing operator in {text!r}")
        if p is None and imag is None:
            raise ParseError(f"not a Gaussian rational literal: {text!r}")
        if q is not None and int(q) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        value = Fraction(int(p) if p else 1, int(q) if q else 1)
        if sign == "-":
            value = -value
        if imag:
            if seen_im:
                raise ParseError(f"two imaginary terms in {text!r}")
            im_part, seen_im = value, True
        else:
            if seen_re:
                raise ParseError(f"two real terms in {text!r}")
            re_part, seen_re = value, True
        pos = m.end()
    return GaussianRational(re_part, im_part)


def format_gaussian(z: GaussianRational) -> str:
    re_, im_ = z.re, z.im
    if im_ == 0:
        return format_rational(re_)
    mag = abs(im_)
    im_txt = "i" if mag == 1 else f"{format_rational(mag)}*i"
    if re_ == 0:
        return ("-" if im_ < 0 else "") + im_txt
    return f"{format_rational(re_)}{'-' if im_ < 0 else '+'}{im_txt}"


_DYADIC_RE = re.compile(r"^\s*([+-]?\d+)\s*\*\s*2\s*\^\s*([+-]?\d+)\s*$")


def parse_dyadic(text: str) -> Dyadic:
    from .errors import ParseError

    m = _DYADIC_RE.match(text)
    if not m:
        raise ParseError(f"not a dyadic literal: {text!r}")
    return Dyadic(int(m.group(1)), int(m.group(2)))


def format_dyadic(x: Dyadic) -> str:
    return str(x)
