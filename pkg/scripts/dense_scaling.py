"""Op-count scaling of amortised evaluation.

    python scripts/dense_scaling.py dense   # full n x n grids, fixed degree
    python scripts/dense_scaling.py circle  # surviving boxes of (x1^2+x2^2)^(d/2) - 1

The first table compares the amortised op count per box with a per-box
Horner evaluation; the second compares it with direct evaluation on the
boxes that survive interval exclusion at a fixed level.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from itertools import product
from math import comb

import numpy as np

from csfpoly import (
    CompiledPoly,
    Grid,
    Interval,
    OpCounter,
    SparsePoly,
    csf_build,
    eval_box_direct,
    evaluate_boxes,
    evaluate_csf,
)


@dataclass
class DenseConfig:
    degree: int = 20
    sizes: list[int] = field(default_factory=lambda: [64, 128, 256, 512])
    seed: int = 0


@dataclass
class CircleConfig:
    degrees: list[int] = field(default_factory=lambda: [2, 4, 8, 16, 32])
    level: int = 8


def dense(cfg: DenseConfig) -> None:
    d = cfg.degree
    rng = np.random.default_rng(cfg.seed)
    F = SparsePoly(2, {(i, j): int(rng.integers(1, 11)) for i in range(d + 1) for j in range(d + 1)})
    cp = CompiledPoly(F)
    horner = (d + 1) ** 2 + (d + 1)
    print(f"d = {d}, per-box Horner = {horner} ops")
    print(f"{'n':>5} {'ops':>12} {'ops/box':>8} {'gain':>6}")
    for n in cfg.sizes:
        g = Grid.uniform([Interval(-1, 1)] * 2, n)
        c = OpCounter()
        evaluate_boxes(cp, csf_build(np.array(list(product(range(n), repeat=2)))), *g.interval_arrays(), counter=c)
        per = c.total / n**2
        print(f"{n:>5} {c.total:>12} {per:>8.1f} {horner / per:>6.1f}")


def circle(cfg: CircleConfig) -> None:
    n = 1 << cfg.level
    g = Grid.uniform([Interval(-2, 2)] * 2, n)
    full = np.array(list(product(range(n), repeat=2)))
    print(f"{'d':>3} {'boxes':>6} {'amortised/box':>13} {'direct/box':>10} {'ratio':>6}")
    for d in cfg.degrees:
        h = d // 2
        F = SparsePoly(2, {(2 * i, 2 * (h - i)): comb(h, i) for i in range(h + 1)} | {(0, 0): -1})
        lo, hi = evaluate_boxes(CompiledPoly(F), csf_build(full), *g.interval_arrays())
        S = csf_build(full[(lo <= 0) & (hi >= 0)])
        a, b = OpCounter(), OpCounter()
        evaluate_csf(F, S, g, a)
        for idx in S.tuples:
            eval_box_direct(F, g.box(idx), b)
        print(f"{d:>3} {len(S):>6} {a.total / len(S):>13.1f} {b.total / len(S):>10.1f} {a.total / b.total:>6.2f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("which", choices=["dense", "circle"])
    a = ap.parse_args()
    dense(DenseConfig()) if a.which == "dense" else circle(CircleConfig())


if __name__ == "__main__":
    main()
