"""Vectorised interval kernels on (lo, hi) numpy arrays.

Every function reproduces the scalar ``Interval`` operation bit for bit:
same error-free transformations, same outward step, same WHOLE sentinel.
"""

from __future__ import annotations

import numpy as np

from .interval import MAX, _BIG, _SPLIT, _TINY

_INF = np.inf


def _pred(x):
    return np.nextafter(x, -_INF)


def _succ(x):
    return np.nextafter(x, _INF)


def _whole_mask(lo, hi):
    return (lo == -MAX) & (hi == MAX)


def _fix(lo, hi, whole=None):
    bad = ~(np.isfinite(lo) & np.isfinite(hi))
    if whole is not None:
        bad |= whole
    if bad.any():
        lo = np.where(bad, -MAX, lo)
        hi = np.where(bad, MAX, hi)
    return lo, hi


def add_rd(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return np.where(err < 0.0, _pred(s), np.where(err == 0.0, s, np.where(err > 0.0, s, -_INF)))


def add_ru(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return np.where(err > 0.0, _succ(s), np.where(err == 0.0, s, np.where(err < 0.0, s, _INF)))


def _mul_rd_ru(a, b):
    p = a * b
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    loose = (np.abs(p) < _TINY) | (np.abs(a) > _BIG) | (np.abs(b) > _BIG)
    rd = np.where(loose | (err < 0.0), _pred(p), p)
    ru = np.where(loose | (err > 0.0), _succ(p), p)
    # in the loose range the exact product's sign is still known; never widen across 0
    pos = (a > 0.0) == (b > 0.0)
    rd = np.where(loose & pos, np.maximum(rd, 0.0), rd)
    ru = np.where(loose & ~pos, np.minimum(ru, 0.0), ru)
    zero = (a == 0.0) | (b == 0.0)
    rd = np.where(zero, 0.0, rd)
    ru = np.where(zero, 0.0, ru)
    overflow = ~np.isfinite(p) & ~zero
    if overflow.any():
        rd = np.where(overflow, -_INF, rd)
        ru = np.where(overflow, _INF, ru)
    return rd, ru


def add(alo, ahi, blo, bhi):
    with np.errstate(all="ignore"):
        whole = _whole_mask(alo, ahi) | _whole_mask(blo, bhi)
        return _fix(add_rd(alo, blo), add_ru(ahi, bhi), whole)


def sub(alo, ahi, blo, bhi):
    return add(alo, ahi, -bhi, -blo)


def mul(alo, ahi, blo, bhi):
    with np.errstate(all="ignore"):
        whole = _whole_mask(alo, ahi) | _whole_mask(blo, bhi)
        l1, u1 = _mul_rd_ru(alo, blo)
        l2, u2 = _mul_rd_ru(alo, bhi)
        l3, u3 = _mul_rd_ru(ahi, blo)
        l4, u4 = _mul_rd_ru(ahi, bhi)
        lo = np.minimum(np.minimum(l1, l2), np.minimum(l3, l4))
        hi = np.maximum(np.maximum(u1, u2), np.maximum(u3, u4))
        return _fix(lo, hi, whole)


def _pow_nonneg(a, e, up):
    idx = 1 if up else 0
    result = a
    for _ in range(e - 1):
        result = _mul_rd_ru(result, a)[idx]
    return result


def pow(lo, hi, e: int):
    """Monotone-aware interval power, elementwise."""
    if e < 0:
        raise ValueError("negative exponent")
    if e == 0:
        return np.ones_like(lo), np.ones_like(hi)
    if e == 1:
        return lo, hi
    with np.errstate(all="ignore"):
        whole = _whole_mask(lo, hi)
        if e % 2 == 0:
            pos = lo >= 0.0
            neg = hi <= 0.0
            small = np.where(pos, lo, np.where(neg, -hi, 0.0))
            big = np.where(pos, hi, np.where(neg, -lo, np.maximum(-lo, hi)))
            rlo = _pow_nonneg(small, e, False)
            rlo = np.where(pos | neg, rlo, 0.0)
            rhi = _pow_nonneg(big, e, True)
            return _fix(np.maximum(rlo, 0.0), rhi, whole)
        lpos = lo >= 0.0
        hpos = hi >= 0.0
        rlo = np.where(lpos, _pow_nonneg(np.abs(lo), e, False), -_pow_nonneg(np.abs(lo), e, True))
        rhi = np.where(hpos, _pow_nonneg(np.abs(hi), e, True), -_pow_nonneg(np.abs(hi), e, False))
        return _fix(rlo, rhi, whole)


def midpoint(lo, hi):
    mid = 0.5 * lo + 0.5 * hi
    return np.minimum(np.maximum(mid, lo), hi)


def contains_zero(lo, hi):
    return (lo <= 0.0) & (hi >= 0.0)
