"""Closed floating-point intervals with outward rounding.

Rounding is done without touching the FPU mode: every sum and product is
computed in round-to-nearest, its exact error is recovered with an
error-free transformation (TwoSum / Dekker's TwoProduct), and the result is
moved one ulp outward only when the error shows it was inexact.  The
endpoints are therefore the correctly rounded directed results, which makes
this module bit-compatible with the vectorised twin in ``ivarray``.

Overflow never produces inf or NaN endpoints.  Any operation that overflows,
or that involves ``WHOLE``, returns ``WHOLE = [-MAX, MAX]``.
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from typing import Union

MAX = sys.float_info.max
_SPLIT = 134217729.0  # 2**27 + 1
# outside these magnitudes Dekker's error term is unreliable
_TINY = 2.0**-969
_BIG = 2.0**995

_nextafter = math.nextafter
_INF = math.inf

Number = Union[int, float]


def _pred(x: float) -> float:
    return _nextafter(x, -_INF)


def _succ(x: float) -> float:
    return _nextafter(x, _INF)


def add_rd_ru(a: float, b: float) -> tuple[float, float]:
    """Round-down and round-up of the exact sum a + b."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    if err == 0.0:
        return s, s
    if err > 0.0:
        return s, _succ(s)
    if err < 0.0:
        return _pred(s), s
    return -_INF, _INF  # overflow, err is NaN


def _two_prod_err(a: float, b: float, p: float) -> float:
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def mul_rd_ru(a: float, b: float) -> tuple[float, float]:
    """Round-down and round-up of the exact product a * b."""
    if a == 0.0 or b == 0.0:
        return 0.0, 0.0
    p = a * b
    if p == _INF or p == -_INF or p != p:
        return -_INF, _INF
    if abs(p) < _TINY or abs(a) > _BIG or abs(b) > _BIG:
        # the exact product is nonzero with a known sign; never widen across 0
        if (a > 0.0) == (b > 0.0):
            return max(_pred(p), 0.0), _succ(p)
        return _pred(p), min(_succ(p), 0.0)
    err = _two_prod_err(a, b, p)
    if err == 0.0:
        return p, p
    if err > 0.0:
        return p, _succ(p)
    return _pred(p), p


def _pow_nonneg(a: float, e: int, up: bool) -> float:
    """Directed-rounded a**e for a >= 0, e >= 1, as a chain of e - 1 products.

    The chain rounds exactly like repeated interval multiplication, so the
    power never pokes out of the product a * a * ... * a.
    """
    idx = 1 if up else 0
    result = a
    for _ in range(e - 1):
        result = mul_rd_ru(result, a)[idx]
    return result


def pow_cost(e: int) -> int:
    """Multiplications spent on x**e."""
    return max(e - 1, 0)


class Interval:
    """A closed interval [lo, hi] with finite float endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Number, hi: Number | None = None):
        if hi is None:
            hi = lo
        if isinstance(lo, int) or isinstance(hi, int):
            iv = _from_exact(Fraction(lo), Fraction(hi))
            lo, hi = iv.lo, iv.hi
        lo = float(lo)
        hi = float(hi)
        if lo != lo or hi != hi:
            raise ValueError("interval endpoint is NaN")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        if lo == -_INF or hi == _INF or lo == _INF or hi == -_INF:
            lo, hi = -MAX, MAX
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        obj = object.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @classmethod
    def coerce(cls, x) -> "Interval":
        if isinstance(x, Interval):
            return x
        if isinstance(x, float):
            return cls(x, x)
        if isinstance(x, (int, Fraction)):
            return _from_exact(Fraction(x), Fraction(x))
        raise TypeError(f"cannot convert {type(x).__name__} to Interval")

    # -- predicates -------------------------------------------------------
    def is_whole(self) -> bool:
        return self.lo == -MAX and self.hi == MAX

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, Fraction):
            return Fraction(self.lo) <= x <= Fraction(self.hi)
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def excludes_zero(self) -> bool:
        return self.lo > 0.0 or self.hi < 0.0

    @property
    def mid(self) -> float:
        return iv_geometry(self)[0]

    @property
    def width(self) -> float:
        return iv_geometry(self)[1]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.coerce(other)
        return _add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.coerce(other)
        return _add(self, Interval._raw(-other.hi, -other.lo))

    def __rsub__(self, other) -> "Interval":
        return Interval.coerce(other) - self

    def __neg__(self) -> "Interval":
        return Interval._raw(-self.hi, -self.lo)

    def __mul__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.coerce(other)
        return _mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Interval":
        return iv_pow(self, e)

    # -- comparisons ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        if isinstance(other, (int, float, Fraction)):
            return self.lo == other and self.hi == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self) -> str:
        return f"[{self.lo:.17g}, {self.hi:.17g}]"


WHOLE = Interval._raw(-MAX, MAX)


def _fix(lo: float, hi: float) -> Interval:
    if lo == -_INF or hi == _INF or lo != lo or hi != hi:
        return WHOLE
    return Interval._raw(lo, hi)


def _from_exact(lo: Fraction, hi: Fraction) -> Interval:
    """Smallest float interval containing the rational range [lo, hi]."""
    flo = float(lo) if abs(lo) <= MAX else (-_INF if lo < 0 else MAX)
    fhi = float(hi) if abs(hi) <= MAX else (_INF if hi > 0 else -MAX)
    if abs(flo) != _INF and Fraction(flo) > lo:
        flo = _pred(flo)
    if abs(fhi) != _INF and Fraction(fhi) < hi:
        fhi = _succ(fhi)
    return _fix(flo, fhi)


def _add(a: Interval, b: Interval) -> Interval:
    if (a.lo == -MAX and a.hi == MAX) or (b.lo == -MAX and b.hi == MAX):
        return WHOLE
    lo = add_rd_ru(a.lo, b.lo)[0]
    hi = add_rd_ru(a.hi, b.hi)[1]
    return _fix(lo, hi)


def _mul(a: Interval, b: Interval) -> Interval:
    if (a.lo == -MAX and a.hi == MAX) or (b.lo == -MAX and b.hi == MAX):
        return WHOLE
    l1, u1 = mul_rd_ru(a.lo, b.lo)
    l2, u2 = mul_rd_ru(a.lo, b.hi)
    l3, u3 = mul_rd_ru(a.hi, b.lo)
    l4, u4 = mul_rd_ru(a.hi, b.hi)
    return _fix(min(l1, l2, l3, l4), max(u1, u2, u3, u4))


def iv_add_sub_mul(op: str, a: Interval, b: Interval) -> Interval:
    """Apply ``op`` in {"add", "sub", "mul"} with outward rounding."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown interval operation {op!r}")


def iv_pow(a: Interval, e: int) -> Interval:
    """Enclosure of {x**e : x in a}, using the monotonicity of x**e.

    For even ``e`` and ``a`` containing 0 the lower endpoint is exactly 0,
    which is tighter than multiplying ``a`` by itself.
    """
    if e < 0:
        raise ValueError("negative exponent")
    if e == 0:
        return Interval._raw(1.0, 1.0)
    if e == 1:
        return a
    if a.lo == -MAX and a.hi == MAX:
        return WHOLE
    lo, hi = a.lo, a.hi
    if e % 2 == 0:
        if lo >= 0.0:
            r = (_pow_nonneg(lo, e, False), _pow_nonneg(hi, e, True))
        elif hi <= 0.0:
            r = (_pow_nonneg(-hi, e, False), _pow_nonneg(-lo, e, True))
        else:
            r = (0.0, _pow_nonneg(max(-lo, hi), e, True))
        return _fix(max(r[0], 0.0), r[1])
    rlo = _pow_nonneg(lo, e, False) if lo >= 0.0 else -_pow_nonneg(-lo, e, True)
    rhi = _pow_nonneg(hi, e, True) if hi >= 0.0 else -_pow_nonneg(-hi, e, False)
    return _fix(rlo, rhi)


def iv_geometry(a: Interval) -> tuple[float, float]:
    """Midpoint (a float inside ``a``) and upward-rounded width."""
    mid = 0.5 * a.lo + 0.5 * a.hi
    mid = min(max(mid, a.lo), a.hi)
    width = add_rd_ru(a.hi, -a.lo)[1]
    return mid, width


def hull(*items) -> Interval:
    ivs = [Interval.coerce(x) for x in items]
    return Interval._raw(min(i.lo for i in ivs), max(i.hi for i in ivs))
