from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from csfpoly import Interval, SparsePoly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIG4 = SparsePoly(2, {(0, 0): 5, (0, 1): 1, (1, 0): 7, (1, 1): 3, (3, 0): 8, (3, 3): 4, (3, 4): 9})
CIRCLE = SparsePoly(2, {(2, 0): 1, (0, 2): 1, (0, 0): -1})


def exact_value(F: SparsePoly, point) -> Fraction:
    """F at a rational point, in exact arithmetic."""
    pt = [Fraction(x) for x in point]
    total = Fraction(0)
    for exp, c in F.terms:
        m = Fraction(c)
        for x, e in zip(pt, exp):
            m *= x**e
        total += m
    return total


def encloses(iv: Interval, value: Fraction) -> bool:
    return Fraction(iv.lo) <= value <= Fraction(iv.hi)


def dyadic_samples(rng, box, n, bits=20):
    """n points inside box, each coordinate a dyadic rational (exact as float)."""
    out = []
    for _ in range(n):
        pt = []
        for b in box:
            t = Fraction(int(rng.integers(0, 2**bits + 1)), 2**bits)
            x = Fraction(b.lo) + t * (Fraction(b.hi) - Fraction(b.lo))
            pt.append(x)
        out.append(pt)
    return out


def random_poly(rng, k, max_deg=6, max_terms=20, lo=-10, hi=10, floats=False):
    n = int(rng.integers(1, max_terms + 1))
    terms = {}
    for _ in range(n):
        e = tuple(int(v) for v in rng.integers(0, max_deg + 1, size=k))
        c = float(rng.uniform(lo, hi)) if floats else int(rng.integers(lo, hi + 1))
        terms[e] = c
    return SparsePoly(k, terms)


@st.composite
def polys(draw, k=None, max_deg=6, max_terms=12, floats=False):
    k = draw(st.integers(1, 4)) if k is None else k
    exps = st.tuples(*[st.integers(0, max_deg)] * k)
    coef = st.floats(-10, 10, allow_nan=False, width=32) if floats else st.integers(-10, 10)
    terms = draw(st.dictionaries(exps, coef, min_size=1, max_size=max_terms))
    return SparsePoly(k, terms)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw, elements=finite):
    a, b = draw(elements), draw(elements)
    return Interval(min(a, b), max(a, b))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
