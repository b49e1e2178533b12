import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from csfpoly import (
    ArityMismatch,
    BoxSet,
    IndexOutOfRange,
    Interval,
    InvalidThreshold,
    SolveOptions,
    SparsePoly,
    bisect,
    box_of_index,
    subdivide_enclose,
)
from csfpoly.subdivide import axis_partition, threshold_level

from conftest import CIRCLE, exact_value

I = Interval
D2 = [(-2.0, 2.0)] * 2


def test_box_of_index_examples():
    assert box_of_index([(0, 1)] * 2, 1, (0, 0)) == (I(0, 0.5), I(0, 0.5))
    assert box_of_index([(0, 1)] * 2, 0, (0, 0)) == (I(0, 1), I(0, 1))
    assert box_of_index(D2, 2, (3, 0)) == (I(1, 2), I(-2, -1))
    with pytest.raises(IndexOutOfRange):
        box_of_index(D2, 2, (4, 0))
    with pytest.raises(ArityMismatch):
        box_of_index(D2, 2, (0,))


def test_bisect_examples():
    S = bisect(BoxSet.from_indices(1, [(1, 0)]))
    assert S.level == 2 and S.indices.tolist() == [[2, 0], [2, 1], [3, 0], [3, 1]]
    E = bisect(BoxSet.from_indices(3, np.zeros((0, 2), dtype=int), k=2))
    assert E.level == 4 and len(E) == 0
    R = bisect(BoxSet.root(2))
    assert R.indices.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]


@given(st.integers(1, 4).flatmap(lambda k: st.lists(st.tuples(*[st.integers(0, 7)] * k), min_size=1, max_size=40, unique=True)))
def test_bisect_children(idx):
    k = len(idx[0])
    S = BoxSet.from_indices(3, idx)
    T = bisect(S)
    assert len(T) == len(S) * 2**k and T.level == 4
    kids = {tuple(2 * i + b for i, b in zip(p, bits)) for p in idx for bits in product((0, 1), repeat=k)}
    assert {tuple(t) for t in T.indices.tolist()} == kids
    assert (T.indices < 16).all()


@given(st.floats(-10, 10), st.floats(0.01, 10), st.integers(0, 9))
def test_partition_matches_box_of_index(a, w, level):
    b = a + w
    assume(a < b)
    lo, hi = axis_partition(a, b, 2**level)
    for t in {0, 2**level - 1, 2**level // 2}:
        (box,) = box_of_index([(a, b)], level, (t,))
        assert (box.lo, box.hi) == (lo[t], hi[t])
    assert lo[0] == a and hi[-1] >= b
    assert (hi[:-1] >= lo[1:]).all()  # neighbours overlap or touch


def test_widths_shrink_by_half():
    for level in range(12):
        B = box_of_index(D2, level, (0, 2**level - 1))
        for b in B:
            assert b.hi - b.lo == 4.0 / 2**level


def test_threshold_level():
    dom = tuple(I(-2, 2) for _ in range(2))
    assert threshold_level(dom, 0.125) == 6
    assert threshold_level(dom, 5) == 0


def test_bad_arguments():
    with pytest.raises(InvalidThreshold):
        subdivide_enclose([CIRCLE], [], D2, 0.0)
    with pytest.raises(InvalidThreshold):
        subdivide_enclose([CIRCLE], [], D2, -1.0)
    with pytest.raises(ArityMismatch):
        subdivide_enclose([CIRCLE], [SparsePoly(3, {(1, 0, 0): 1})], D2, 0.1)
    with pytest.raises(ArityMismatch):
        subdivide_enclose([CIRCLE], [], [(-2, 2)], 0.1)


def circle_points(n):
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return np.stack([np.cos(th), np.sin(th)], axis=1)


def covered(enc, pts):
    """Boolean mask: point lies in some output box (closed boxes)."""
    hit = np.zeros(len(pts), dtype=bool)
    for _, lv, idx in enc.records():
        B = enc.box(lv, idx)
        m = np.ones(len(pts), dtype=bool)
        for d, b in enumerate(B):
            m &= (pts[:, d] >= b.lo) & (pts[:, d] <= b.hi)
        hit |= m
    return hit


def vertex_signs_exact(F, B):
    vals = [exact_value(F, [Fraction(b.hi if s else b.lo) for b, s in zip(B, bits)])
            for bits in product((0, 1), repeat=len(B))]
    return any(v < 0 for v in vals) and any(v > 0 for v in vals)


@pytest.mark.parametrize("scheme", ["interval", "taylor"])
def test_circle_enclosure(scheme):
    enc = subdivide_enclose([CIRCLE], [], D2, 0.125, options=SolveOptions(scheme=scheme))
    assert len(enc.included) > 0
    pts = circle_points(2000)
    assert covered(enc, pts).all()
    for lv, idx in enc.included:
        B = enc.box(lv, idx)
        assert max(b.hi - b.lo for b in B) < 0.125
        assert vertex_signs_exact(CIRCLE, B)
    seen = [(lv, idx) for _, lv, idx in enc.records()]
    assert len(seen) == len(set(seen))


def test_positive_polynomial_is_empty():
    F = SparsePoly(2, {(2, 0): 1, (0, 2): 1, (0, 0): 1})
    enc = subdivide_enclose([F], [], D2, 2**-5 * 4)
    assert len(enc) == 0 and len(enc.stats) <= 2


def test_line_arrangement_is_conserved():
    # (x1 - 0.3)(x2 + 0.7)(x1 + x2 - 0.1)
    a = {(1, 0): 1, (0, 0): -0.3}
    b = {(0, 1): 1, (0, 0): 0.7}
    c = {(1, 0): 1, (0, 1): 1, (0, 0): -0.1}

    def mul(p, q):
        out = {}
        for e1, c1 in p.items():
            for e2, c2 in q.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                out[e] = out.get(e, 0) + c1 * c2
        return out

    F = SparsePoly(2, mul(mul(a, b), c))
    enc = subdivide_enclose([F], [], D2, 0.1, max_depth=8)
    s = np.linspace(-2, 2, 3400)
    pts = np.concatenate([
        np.stack([np.full_like(s, 0.3), s], 1),
        np.stack([s, np.full_like(s, -0.7)], 1),
        np.stack([s, 0.1 - s], 1),
    ])
    pts = pts[(np.abs(pts) <= 2).all(1)]
    assert len(pts) >= 10_000
    assert covered(enc, pts).all()


def test_discarded_boxes_hold_no_solution(rng):
    F = SparsePoly(2, {(3, 0): 1, (0, 2): -1, (1, 1): 0.5, (0, 0): -0.2})
    enc = subdivide_enclose([F], [], D2, 0.25, options=SolveOptions(scheme="taylor", keep_excluded=True))
    assert enc.excluded
    for lv, idx in enc.excluded:
        B = enc.box(lv, idx)
        for _ in range(5):
            pt = [Fraction(float(rng.uniform(b.lo, b.hi))) for b in B]
            assert abs(exact_value(F, pt)) > 1e-12


def test_system_stops_at_threshold():
    line = SparsePoly(2, {(1, 0): 1, (0, 1): -1})
    enc = subdivide_enclose([CIRCLE, line], [], D2, 0.05)
    assert not enc.included and enc.undetermined
    assert {lv for lv, _ in enc.undetermined} == {threshold_level(enc.domain, 0.05)}
    r = 1 / math.sqrt(2)
    assert covered(enc, np.array([[r, r], [-r, -r]])).all()


def test_inequalities_cut_the_curve():
    half = SparsePoly(2, {(1, 0): -1})  # -x1 <= 0
    enc = subdivide_enclose([CIRCLE], [half], D2, 0.1)
    for _, lv, idx in enc.records():
        assert enc.box(lv, idx)[0].hi >= 0
    assert covered(enc, circle_points(500)[circle_points(500)[:, 0] > 0.01]).all()


def test_level_discipline_and_stats():
    enc = subdivide_enclose([CIRCLE], [], D2, 0.125, options=SolveOptions(scheme="interval"))
    for s in enc.stats:
        assert s.boxes == s.excluded + s.included + s.undetermined + s.bisected
    for a, b in zip(enc.stats, enc.stats[1:]):
        assert b.level == a.level + 1 and b.boxes == 4 * a.bisected
    for _, lv, idx in enc.records():
        assert all(0 <= i < 2**lv for i in idx)


def test_workers_do_not_change_the_result():
    base = subdivide_enclose([CIRCLE], [], D2, 0.03, options=SolveOptions(workers=1)).records()
    for w in (2, 4):
        assert subdivide_enclose([CIRCLE], [], D2, 0.03, options=SolveOptions(workers=w)).records() == base
