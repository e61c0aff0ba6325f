"""Exact arithmetic: rationals, the quadratic field Q(sqrt(q)), rational intervals.

Rationals are :class:`fractions.Fraction` (always in lowest terms, positive
denominator).  :class:`QuadValue` represents ``a + b*sqrt(rad)`` with rational
``a`` and ``b``; :class:`RatInterval` is a closed interval with rational
endpoints.  Transcendental quantities (logarithms, exponentials, cosines,
square roots) are returned as enclosing intervals whose widths are controlled
by a precision budget given in bits.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction
Number = Union[int, Fraction]


class MixedRadicandError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------

def rat(x) -> Fraction:
    """Coerce ints, Fractions or ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return rat_from_str(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def rat_to_str(x: Number) -> str:
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_from_str(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        if not _is_int_literal(num) or not den.isdigit():
            raise ValueError(f"malformed rational {s!r}")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {s!r}")
        return Fraction(int(num), int(den))
    if not _is_int_literal(s):
        raise ValueError(f"malformed rational {s!r}")
    return Fraction(int(s))


def _is_int_literal(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return body.isdigit()


def floor_rat(x: Number) -> int:
    x = rat(x)
    return x.numerator // x.denominator


def ceil_rat(x: Number) -> int:
    x = rat(x)
    return -((-x.numerator) // x.denominator)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


# ---------------------------------------------------------------------------
# Q(sqrt(rad))
# ---------------------------------------------------------------------------

@total_ordering
class QuadValue:
    """The real number ``a + b*sqrt(rad)``.

    A perfect-square radicand folds ``b*sqrt(rad)`` into the rational part,
    leaving ``rad == 1`` and ``b == 0``.  Arithmetic between values with
    different (non-trivial) radicands raises :class:`MixedRadicandError`.
    """

    __slots__ = ("a", "b", "rad")

    def __init__(self, a: Number = 0, b: Number = 0, rad: int = 1):
        a, b = rat(a), rat(b)
        if rad < 1:
            raise ValueError("radicand must be a positive integer")
        if is_square(rad):
            a, b, rad = a + b * math.isqrt(rad), Fraction(0), 1
        elif b == 0:
            rad = 1
        self.a = a
        self.b = b
        self.rad = rad

    @classmethod
    def sqrt(cls, q: int) -> QuadValue:
        return cls(0, 1, q)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def _coerce(self, other) -> QuadValue | None:
        if isinstance(other, QuadValue):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadValue(other)
        return None

    def _common_rad(self, other: QuadValue) -> int:
        if self.rad == 1:
            return other.rad
        if other.rad == 1 or other.rad == self.rad:
            return self.rad
        raise MixedRadicandError(
            f"cannot combine values in Q(sqrt({self.rad})) and Q(sqrt({other.rad}))")

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadValue(self.a + o.a, self.b + o.b, self._common_rad(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadValue(-self.a, -self.b, self.rad)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = self._common_rad(o)
        return QuadValue(self.a * o.a + self.b * o.b * r,
                         self.a * o.b + self.b * o.a, r)

    __rmul__ = __mul__

    def conjugate(self) -> QuadValue:
        return QuadValue(self.a, -self.b, self.rad)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.rad

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero in Q(sqrt(q))")
        self._common_rad(o)
        n = o.norm()
        num = self * o.conjugate()
        return QuadValue(num.a / n, num.b / n, num.rad)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadValue(1) / (self ** -k)
        result, base = QuadValue(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        return quad_sign(self)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.rad == o.rad)

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return quad_sign(self - o) < 0

    def __hash__(self):
        return hash((self.a, self.b, self.rad if self.b else 1))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.rad)

    def __floor__(self):
        return quad_floor(self)

    def __repr__(self):
        return f"QuadValue({rat_to_str(self.a)!r}, {rat_to_str(self.b)!r}, {self.rad})"

    def __str__(self):
        if self.b == 0:
            return rat_to_str(self.a)
        b = rat_to_str(abs(self.b))
        sgn = "-" if self.b < 0 else "+"
        if self.a == 0:
            return f"{'-' if self.b < 0 else ''}{b}*sqrt({self.rad})"
        return f"{rat_to_str(self.a)} {sgn} {b}*sqrt({self.rad})"

    def to_json(self) -> dict:
        return {"a": rat_to_str(self.a), "b": rat_to_str(self.b), "rad": self.rad}

    @classmethod
    def from_json(cls, obj: dict) -> QuadValue:
        return cls(rat(obj["a"]), rat(obj["b"]), int(obj["rad"]))

    def enclosure(self, bits: int = 64) -> RatInterval:
        if self.b == 0:
            return RatInterval(self.a, self.a)
        s = sqrt_interval(self.rad, bits + _bitlen(self.b))
        return RatInterval.point(self.a) + s.scale(self.b)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def quad_sign(x: QuadValue) -> int:
    """Exact sign of ``a + b*sqrt(rad)``."""
    sa, sb = _sgn(x.a), _sgn(x.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the term with the larger square wins
    return sa * _sgn(x.a * x.a - x.b * x.b * x.rad)


def quad_floor(x: QuadValue) -> int:
    """Largest integer n with n <= a + b*sqrt(rad)."""
    if x.b == 0:
        return floor_rat(x.a)
    # write x = (A + B sqrt(rad)) / d; then B sqrt(rad) lies in [lo, lo + 1]
    d = x.a.denominator * x.b.denominator // math.gcd(x.a.denominator, x.b.denominator)
    A, B = int(x.a * d), int(x.b * d)
    root = math.isqrt(B * B * x.rad)
    lo = root if B > 0 else -root - 1
    n = (A + lo) // d
    while quad_sign(x - n) < 0:
        n -= 1
    while quad_sign(x - (n + 1)) >= 0:
        n += 1
    return n


# ---------------------------------------------------------------------------
# Rational intervals
# ---------------------------------------------------------------------------

def _bitlen(x: Fraction) -> int:
    x = rat(x)
    return max(abs(x.numerator).bit_length() - x.denominator.bit_length(), 0) + 1


def _round_down(x: Fraction, bits: int) -> Fraction:
    d = 1 << bits
    return Fraction((x.numerator * d) // x.denominator, d)


def _round_up(x: Fraction, bits: int) -> Fraction:
    d = 1 << bits
    return Fraction(-((-x.numerator * d) // x.denominator), d)


class RatInterval:
    """Closed interval ``[lo, hi]`` with rational endpoints.

    Every operation returns an interval containing all exact results for
    operands drawn from the input intervals.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Number, hi: Number):
        lo, hi = rat(lo), rat(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, x: Number) -> RatInterval:
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, RatInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, QuadValue):
            return quad_sign(x - self.lo) >= 0 and quad_sign(x - self.hi) <= 0
        return self.lo <= x <= self.hi

    __contains__ = contains

    def _coerce(self, other) -> RatInterval | None:
        if isinstance(other, RatInterval):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatInterval.point(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RatInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def scale(self, c: Number) -> RatInterval:
        c = rat(c)
        return RatInterval(min(self.lo * c, self.hi * c), max(self.lo * c, self.hi * c))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * RatInterval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        if k == 0:
            return RatInterval(1, 1)
        a, b = self.lo ** k, self.hi ** k
        if k % 2 == 0 and self.lo < 0 < self.hi:
            return RatInterval(0, max(a, b))
        return RatInterval(min(a, b), max(a, b))

    def rounded(self, bits: int) -> RatInterval:
        """Outward rounding of both endpoints to dyadic rationals with ``bits`` fractional bits."""
        return RatInterval(_round_down(self.lo, bits), _round_up(self.hi, bits))

    def intersect(self, other: RatInterval) -> RatInterval:
        return RatInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def sign(self) -> int | None:
        """+1 / -1 if the interval lies strictly on one side of zero, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def __eq__(self, other):
        if not isinstance(other, RatInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"RatInterval({rat_to_str(self.lo)!r}, {rat_to_str(self.hi)!r})"

    def to_json(self) -> dict:
        return {"lo": rat_to_str(self.lo), "hi": rat_to_str(self.hi)}

    @classmethod
    def from_json(cls, obj: dict) -> RatInterval:
        return cls(rat(obj["lo"]), rat(obj["hi"]))


def to_interval(x, bits: int = 96) -> RatInterval:
    if isinstance(x, RatInterval):
        return x
    if isinstance(x, QuadValue):
        return x.enclosure(bits)
    return RatInterval.point(rat(x))


# ---------------------------------------------------------------------------
# Transcendental enclosures
# ---------------------------------------------------------------------------

def sqrt_interval(n: Number, bits: int = 64) -> RatInterval:
    """Enclosure of sqrt(n) for rational n >= 0, width at most 2**-bits."""
    n = rat(n)
    if n < 0:
        raise ValueError("square root of a negative number")
    scale = 1 << bits
    # sqrt(p/q) = sqrt(p*q)/q
    p, q = n.numerator, n.denominator
    s = math.isqrt(p * q * scale * scale)
    lo = Fraction(s, q * scale)
    hi = lo if s * s == p * q * scale * scale else Fraction(s + 1, q * scale)
    return RatInterval(lo, hi)


def _atanh_series(z: Fraction, bits: int) -> RatInterval:
    """Enclosure of atanh(z) for 0 <= z <= 1/2, total error below 2**-bits."""
    if z == 0:
        return RatInterval(0, 0)
    w = bits + 8 + bits.bit_length()
    eps = Fraction(1, 1 << bits + 2)
    z2 = z * z
    # term bounds lo_t <= z^(2k+1) <= hi_t, kept as w-bit dyadics
    lo_t, hi_t = _round_down(z, w), _round_up(z, w)
    lo = hi = Fraction(0)
    k = 0
    while True:
        lo += _round_down(lo_t / (2 * k + 1), w)
        hi += _round_up(hi_t / (2 * k + 1), w)
        lo_t, hi_t = _round_down(lo_t * z2, w), _round_up(hi_t * z2, w)
        k += 1
        # tail: sum_{i>=k} z^(2i+1)/(2i+1) <= z^(2k+1) / ((2k+1) * (1 - z^2))
        tail = _round_up(hi_t / ((2 * k + 1) * (1 - z2)), w)
        if tail < eps:
            break
    return RatInterval(lo, hi + tail).rounded(bits + 4)


def _ln2_interval(bits: int) -> RatInterval:
    return _atanh_series(Fraction(1, 3), bits + 2).scale(2)


def ln_interval(x: Number, bits: int = 64) -> RatInterval:
    """Enclosure of the natural logarithm of a positive rational."""
    x = rat(x)
    if x <= 0:
        raise ValueError("logarithm of a non-positive number")
    if x == 1:
        return RatInterval(0, 0)
    # x = 2**k * m with m in [3/4, 3/2): |(m-1)/(m+1)| <= 1/5
    k = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** k
    while m >= Fraction(3, 2):
        m /= 2
        k += 1
    while m < Fraction(3, 4):
        m *= 2
        k -= 1
    extra = abs(k).bit_length() + 4
    z = (m - 1) / (m + 1)
    core = _atanh_series(abs(z), bits + 4).scale(2 if z >= 0 else -2)
    return (core + _ln2_interval(bits + extra).scale(k)).rounded(bits + 2)


def ln_upper(q: int, precision_budget: int = 64) -> RatInterval:
    """Interval containing ln(q), of width at most about 2**-precision_budget.

    Callers needing a rigorous upper bound use ``.hi``.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    return ln_interval(Fraction(q), precision_budget)


def exp_interval(x: Number | RatInterval, bits: int = 64) -> RatInterval:
    """Enclosure of exp over a rational point or interval (monotone)."""
    if isinstance(x, RatInterval):
        return RatInterval(exp_interval(x.lo, bits).lo, exp_interval(x.hi, bits).hi)
    x = rat(x)
    if x == 0:
        return RatInterval(1, 1)
    if x < 0:
        e = exp_interval(-x, bits + 8)
        return RatInterval(1 / e.hi, 1 / e.lo).rounded(bits)
    # exp(x) = exp(x / 2**k) ** (2**k) with x / 2**k <= 1/2
    k = max(0, x.numerator.bit_length() - x.denominator.bit_length() + 1)
    y = x / (1 << k)
    work = bits + 2 * k + _bitlen(x) + 16
    eps = Fraction(1, 1 << (work - 4))   # above the rounding floor 2**-work
    lo = hi = Fraction(0)
    lo_t = hi_t = Fraction(1)
    n = 0
    while True:
        lo += lo_t
        hi += hi_t
        n += 1
        lo_t, hi_t = _round_down(lo_t * y / n, work), _round_up(hi_t * y / n, work)
        # tail <= term / (1 - y) <= 2 * term for y <= 1/2
        if hi_t * 2 < eps:
            break
    iv = RatInterval(lo, hi + 2 * hi_t).rounded(work)
    for _ in range(k):
        iv = (iv * iv).rounded(work)
    return iv.rounded(bits)


def pi_interval(bits: int = 64) -> RatInterval:
    """Enclosure of pi via Machin's formula with alternating-series bounds."""
    w = bits + 16

    def atan_inv(n: int) -> RatInterval:
        x2 = n * n
        eps = Fraction(1, 1 << (bits + 8))
        lo = hi = Fraction(0)
        power = n       # n^(2k+1)
        k = 0
        while True:
            nxt = Fraction(1, power * (2 * k + 1))
            if nxt < eps:
                if k % 2 == 0:
                    return RatInterval(lo, hi + _round_up(nxt, w))
                return RatInterval(lo - _round_up(nxt, w), hi)
            if k % 2 == 0:
                lo, hi = lo + _round_down(nxt, w), hi + _round_up(nxt, w)
            else:
                lo, hi = lo - _round_up(nxt, w), hi - _round_down(nxt, w)
            power *= x2
            k += 1

    return (atan_inv(5).scale(16) - atan_inv(239).scale(4)).rounded(bits + 2)


def cos_interval(x: RatInterval | Number, bits: int = 64) -> RatInterval:
    """Enclosure of cos over a rational point or a narrow interval."""
    x = to_interval(x)
    if x.width > 1:
        return RatInterval(-1, 1)
    # cos is 1-Lipschitz: cos([lo, hi]) within cos(mid) +- width/2
    c = _cos_point(x.mid, bits + 4)
    half = x.width / 2
    return RatInterval(max(Fraction(-1), c.lo - half), min(Fraction(1), c.hi + half))


def _cos_point(x: Fraction, bits: int) -> RatInterval:
    # reduce |x| below 1/2 by halving, then double-angle cos(2y) = 2cos(y)^2 - 1
    x = abs(x)
    k = 0
    while x > Fraction(1, 2):
        x /= 2
        k += 1
    work = bits + 3 * k + 8 + bits.bit_length()
    eps = Fraction(1, 1 << (work - 4))   # above the rounding floor 2**-work
    x2_lo, x2_hi = _round_down(x * x, work), _round_up(x * x, work)
    # bounds on the magnitudes x^(2n) / (2n)!, summed with alternating signs
    lo_t = hi_t = Fraction(1)
    lo = hi = Fraction(0)
    n = 0
    while True:
        if n % 2 == 0:
            lo, hi = lo + lo_t, hi + hi_t
        else:
            lo, hi = lo - hi_t, hi - lo_t
        d = (2 * n + 1) * (2 * n + 2)
        lo_t, hi_t = _round_down(lo_t * x2_lo / d, work), _round_up(hi_t * x2_hi / d, work)
        n += 1
        if hi_t < eps:
            iv = RatInterval(lo - hi_t, hi + hi_t)
            break
    iv = iv.rounded(work)
    for _ in range(k):
        iv = (iv ** 2).scale(2) - 1
        iv = RatInterval(max(iv.lo, Fraction(-1)), min(iv.hi, Fraction(1))).rounded(work)
    return iv
