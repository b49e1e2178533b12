"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line with the measured figures; the lines are
repeated in the terminal summary.  ``pytest tests/test_acceptance.py -v -s``
also shows them inline.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from itertools import product
from math import comb
from pathlib import Path

import numpy as np
import pytest

from csfpoly import (
    CompiledPoly,
    Grid,
    Interval,
    OpCounter,
    SparsePoly,
    csf_build,
    dft_csf,
    dft_naive,
    eval_box_direct,
    evaluate_boxes,
    evaluate_csf,
    evaluate_dense_grid,
    read_poly,
)
from csfpoly.cli import main, read_boxes
from csfpoly.subdivide import INCLUDED, box_of_index

from conftest import ACCEPTANCE_LINES, exact_value, random_poly

ROOT = Path(__file__).resolve().parent.parent
SYSTEMS = ROOT / "systems"
CIRCLE_FILE = SYSTEMS / "circle.poly"
CIRCLE_MIN_SIZE = 2.0**-5
OPS_BOUND_CONSTANT = 8
CORPUS_SIZE = 200
CORPUS_GRID = 8  # points or cells per axis
MAX_BOXES = 512
SAMPLES_PER_BOX = 20


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)
    assert ok, line


def make_corpus(seed=20240601):
    """(poly, box index array) pairs shared by criteria 1-3."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(CORPUS_SIZE):
        k = int(rng.integers(2, 5))
        F = random_poly(rng, k, max_deg=6, max_terms=30, lo=-10, hi=10)
        n_all = CORPUS_GRID**k
        m = int(rng.integers(1, min(MAX_BOXES, n_all) + 1))
        flat = rng.choice(n_all, size=m, replace=False)
        idx = np.stack(np.unravel_index(flat, (CORPUS_GRID,) * k), axis=1)
        out.append((F, idx))
    return out


@pytest.fixture(scope="module")
def corpus():
    return make_corpus()


def projections(rows, i, suffix=False):
    return len({tuple(r[-i:]) if suffix else tuple(r[:i]) for r in rows})


def test_criterion_1_exact_oracle(corpus):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    mismatches = checked = 0
    for F, idx in corpus:
        axes = tuple(tuple(int(v) for v in rng.choice(np.arange(-6, 7), CORPUS_GRID, replace=False)) for _ in range(F.nvars))
        grid = Grid(axes)
        res = evaluate_csf(F, csf_build(idx), grid)
        for key, v in res.items():
            point = grid.box(key)
            checked += 1
            if not (v == eval_box_direct(F, point) == exact_value(F, point)):
                mismatches += 1
    dt = time.perf_counter() - t0
    report(1, mismatches == 0 and dt < 60,
           f"{checked} point boxes over {len(corpus)} polys, {mismatches} mismatches, {dt:.1f} s (cap 60 s)")


def _float_values(F, X):
    """Naive float evaluation and a bound on its rounding error."""
    E = np.array([e for e, _ in F.terms], dtype=int).reshape(-1, F.nvars)
    C = np.array([float(c) for _, c in F.terms])
    deg = int(E.max()) if E.size else 0
    pw = np.ones((deg + 1,) + X.shape)
    for e in range(1, deg + 1):
        pw[e] = pw[e - 1] * X
    mon = np.ones((X.shape[0], len(C)))
    for j in range(F.nvars):
        mon *= pw[E[:, j], :, j].T
    terms = mon * C
    vals = terms.sum(axis=1)
    steps = int(E.sum(axis=1).max(initial=0)) + F.nvars + len(C) + 2
    err = 2.0 * steps * 2.0**-53 * np.abs(terms).sum(axis=1) + 1e-300
    return vals, err


def test_criterion_2_interval_soundness(corpus):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    violations = samples = exact_checks = 0
    for F, idx in corpus:
        k = F.nvars
        grid = Grid.uniform([Interval(-1.5, 2)] * k, CORPUS_GRID)
        tree = csf_build(idx)
        res = evaluate_csf(F, tree, grid)
        lo_a, hi_a = grid.interval_arrays()
        flo, fhi = evaluate_boxes(CompiledPoly(F), tree, lo_a, hi_a)
        keys = [key for key, _ in res.items()]
        vals = [Interval.coerce(v) for _, v in res.items()]
        blo = np.array([[lo_a[j][key[j]] for j in range(k)] for key in keys])
        bhi = np.array([[hi_a[j][key[j]] for j in range(k)] for key in keys])
        t = rng.integers(0, 2**20 + 1, size=(len(keys), SAMPLES_PER_BOX, k)) / 2.0**20
        X = blo[:, None, :] + t * (bhi - blo)[:, None, :]
        X = np.clip(X, blo[:, None, :], bhi[:, None, :]).reshape(-1, k)
        v, err = _float_values(F, X)
        elo = np.repeat([iv.lo for iv in vals], SAMPLES_PER_BOX)
        ehi = np.repeat([iv.hi for iv in vals], SAMPLES_PER_BOX)
        flo, fhi = np.repeat(flo, SAMPLES_PER_BOX), np.repeat(fhi, SAMPLES_PER_BOX)
        sure = (np.maximum(elo, flo) <= v - err) & (v + err <= np.minimum(ehi, fhi))
        samples += len(v)
        for s in np.flatnonzero(~sure):
            exact_checks += 1
            y = exact_value(F, X[s])
            if not (Fraction(elo[s]) <= y <= Fraction(ehi[s]) and Fraction(flo[s]) <= y <= Fraction(fhi[s])):
                violations += 1
    dt = time.perf_counter() - t0
    report(2, violations == 0 and dt < 120,
           f"{samples} samples, {violations} violations ({exact_checks} settled in exact arithmetic), "
           f"{dt:.1f} s (cap 120 s)")


def test_criterion_3_projection_bound(corpus):
    worst = 0.0
    failures = 0
    for F, idx in corpus:
        grid = Grid(tuple(tuple(range(CORPUS_GRID)) for _ in range(F.nvars)))
        c = OpCounter()
        evaluate_csf(F, csf_build(idx), grid, c)
        exps = [e for e, _ in F.terms]
        rows = idx.tolist()
        k = F.nvars
        bound = sum(projections(exps, k - i, suffix=True) * projections(rows, i + 1) for i in range(k))
        if bound:
            worst = max(worst, c.total / bound)
        failures += c.total > OPS_BOUND_CONSTANT * bound
    report(3, failures == 0,
           f"max ops / sum N~ N = {worst:.3f} (limit {OPS_BOUND_CONSTANT}), {failures} violations")


def dense_poly(d, seed=4):
    rng = np.random.default_rng(seed)
    coef = rng.integers(1, 11, size=(d + 1, d + 1)) * rng.choice([-1, 1], size=(d + 1, d + 1))
    return SparsePoly(2, {(i, j): int(coef[i, j]) for i in range(d + 1) for j in range(d + 1)})


def test_criterion_4_dense_scaling():
    d = 20
    F = dense_poly(d)
    cp = CompiledPoly(F)
    dom = [Interval(-1, 1)] * 2
    totals = {}
    consistent = True
    for n in (64, 128, 256, 512):
        grid = Grid.uniform(dom, n)
        full = csf_build(np.array(list(product(range(n), repeat=2))))
        fast = OpCounter()
        evaluate_boxes(cp, full, *grid.interval_arrays(), counter=fast)
        if n <= 128:
            # the generic dense sweep is slow in pure Python; cross-check the count where cheap
            gen = OpCounter()
            evaluate_dense_grid(F, grid, gen)
            consistent &= gen.total == fast.total
        totals[n] = fast.total
    ns = np.array(sorted(totals), dtype=float)
    y = np.array([totals[n] for n in sorted(totals)], dtype=float)
    A = np.stack([ns * (d + 1) ** 2, ns**2 * (d + 1)], axis=1)
    (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = np.abs(A @ np.array([a, b]) - y) / y
    amort = totals[256] / 256**2
    horner = (d + 1) ** 2 + (d + 1)
    ok = consistent and resid.max() < 0.10 and horner / amort >= 10
    report(4, ok,
           f"fit a={a:.3f} b={b:.3f}, max residual {resid.max():.2e}; amortized {amort:.1f} ops/box "
           f"vs {horner} per-box Horner ({horner / amort:.1f}x); engines agree: {consistent}")


def test_criterion_5_dft():
    rng = np.random.default_rng(5)
    worst = 0.0
    ratios = []
    for K in range(1, 13):
        N = 2**K
        u = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        c = OpCounter()
        v = dft_csf(u, c)
        ref = dft_naive(u)
        worst = max(worst, np.max(np.abs(v - ref)) / np.max(np.abs(ref)))
        if K >= 3:
            ratios.append(c.total / (N * math.log2(N)))
    drift = max(ratios) / min(ratios) - 1
    report(5, worst <= 1e-9 and drift < 0.25,
           f"max relative deviation {worst:.2e} (tol 1e-9); ops/(N log2 N) in "
           f"[{min(ratios):.3f}, {max(ratios):.3f}], drift {drift:.1%} (limit 25%)")


def circle_points(count, seed=6):
    """Rational points exactly on the unit circle."""
    rng = np.random.default_rng(seed)
    pts = [(Fraction(-1), Fraction(0))]
    for theta in rng.uniform(-math.pi, math.pi, size=count - 1):
        t = Fraction(math.tan(theta / 2))
        pts.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    return pts


def covered(enc, point) -> bool:
    """Exact lookup of the output cells containing point, level by level."""
    by_level = {}
    for _, lv, idx in enc.records():
        by_level.setdefault(lv, set()).add(idx)
    for lv, cells in by_level.items():
        n = 1 << lv
        choices = []
        for dom, p in zip(enc.domain, point):
            w = (Fraction(dom.hi) - Fraction(dom.lo)) / n
            q, r = divmod(p - Fraction(dom.lo), w)
            cand = {int(q)} | ({int(q) - 1} if r == 0 else set())
            choices.append([c for c in cand if 0 <= c < n])
        if any(tuple(c) in cells for c in product(*choices)):
            return True
    return False


def solve_circle(path: Path, workers: int = 1) -> float:
    t0 = time.perf_counter()
    code = main(["solve", str(CIRCLE_FILE), "--min-size", str(CIRCLE_MIN_SIZE),
                 "--workers", str(workers), "--output", str(path)])
    assert code == 0
    return time.perf_counter() - t0


def test_criterion_6_circle(tmp_path):
    dt = solve_circle(tmp_path / "circle.boxes")
    enc = read_boxes((tmp_path / "circle.boxes").read_text())
    F = read_poly(CIRCLE_FILE)
    pts = circle_points(10_000)
    missed = sum(not covered(enc, p) for p in pts)
    bad_z = 0
    for status, lv, idx in enc.records():
        if status != INCLUDED:
            continue
        box = box_of_index(enc.domain, lv, idx)
        vals = [exact_value(F, v) for v in product(*[(b.lo, b.hi) for b in box])]
        bad_z += not (min(vals) <= 0 <= max(vals))
    nz = sum(r[0] == INCLUDED for r in enc.records())
    report(6, missed == 0 and bad_z == 0 and dt < 10,
           f"{len(enc)} boxes ({nz} Z), {missed}/{len(pts)} circle points uncovered, "
           f"{bad_z} Z boxes failing the exact vertex check, {dt:.2f} s (cap 10 s)")


def test_criterion_7_system_a(capsys):
    auto = SYSTEMS / "automatic"
    eqs = sorted(auto.glob("eq*.poly"))
    les = [a for p in sorted(auto.glob("modulus*.poly")) for a in ("--le", str(p))]
    assert len(eqs) == 8 and len(les) == 6
    t0 = time.perf_counter()
    code = main(["solve", *map(str, eqs), *les, "--domain", "-1", "1", "--min-size", "0.0625"])
    dt = time.perf_counter() - t0
    out = capsys.readouterr()
    nboxes = len(out.out.splitlines()) - 2
    report(7, code == 0 and nboxes == 0 and dt < 300,
           f"{nboxes} boxes ({out.err.strip()}), {dt:.1f} s (cap 300 s)")


def test_criterion_8_deep_level_scaling():
    n = 256
    grid = Grid.uniform([Interval(-2, 2)] * 2, n)
    full = np.array(list(product(range(n), repeat=2)))
    per_box, ratios = {}, {}
    for d in (4, 8, 16):
        h = d // 2
        F = SparsePoly(2, {(2 * i, 2 * (h - i)): comb(h, i) for i in range(h + 1)} | {(0, 0): -1})
        lo, hi = evaluate_boxes(CompiledPoly(F), csf_build(full), *grid.interval_arrays())
        S = csf_build(full[(lo <= 0) & (hi >= 0)])
        amort, direct = OpCounter(), OpCounter()
        evaluate_csf(F, S, grid, amort)
        for idx in S.tuples:
            eval_box_direct(F, grid.box(idx), direct)
        per_box[d] = amort.total / len(S)
        ratios[d] = amort.total / direct.total
    growth = math.log2(per_box[16] / per_box[8])
    ok = ratios[16] <= 0.5 and growth < 2
    report(8, ok,
           "per surviving box at n=256: "
           + ", ".join(f"d={d}: {per_box[d]:.1f} ops (x{ratios[d]:.2f} of direct)" for d in per_box)
           + f"; growth exponent 8->16 = {growth:.2f} (< 2)")


def test_criterion_9_determinism(tmp_path):
    outs = {}
    for w in (1, 2, 4):
        p = tmp_path / f"w{w}.boxes"
        solve_circle(p, w)
        outs[w] = p.read_bytes()
    same = outs[1] == outs[2] == outs[4]
    report(9, same, f"boxes output for workers 1/2/4 byte-identical: {same} ({len(outs[1])} bytes)")
