"""Hypersurface enclosure of random dense-ish polynomials, desk-scale.

    python scripts/random_polys.py --vars 2 3 --degrees 4 8 --trials 3

For each (k, d) a random polynomial with integer coefficients is enclosed on
[-2, 2]^k and the time, output size and op counts are printed, once per
scheme.
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

import numpy as np

from csfpoly import SolveOptions, SparsePoly, subdivide_enclose


@dataclass
class Config:
    nvars: list[int] = field(default_factory=lambda: [2, 3])
    degrees: list[int] = field(default_factory=lambda: [4, 8])
    trials: int = 3
    terms: int = 20
    min_size: float = 2.0**-5
    schemes: tuple[str, ...] = ("interval", "taylor")
    workers: int = 1
    seed: int = 0


def random_poly(rng, k: int, d: int, terms: int) -> SparsePoly:
    exps = {tuple(int(v) for v in rng.integers(0, d + 1, size=k)) for _ in range(terms)}
    exps.add((0,) * k)
    return SparsePoly(k, {e: int(rng.integers(-10, 11)) or 1 for e in exps})


def run(cfg: Config) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for k in cfg.nvars:
        for d in cfg.degrees:
            for trial in range(cfg.trials):
                F = random_poly(rng, k, d, cfg.terms)
                for scheme in cfg.schemes:
                    opts = SolveOptions(scheme=scheme, workers=cfg.workers)
                    t0 = time.perf_counter()
                    enc = subdivide_enclose([F], domain=[(-2, 2)] * k, min_size=cfg.min_size, options=opts)
                    dt = time.perf_counter() - t0
                    rows.append(dict(k=k, d=d, trial=trial, scheme=scheme, seconds=dt,
                                     included=len(enc.included), undetermined=len(enc.undetermined),
                                     ops=enc.total_ops().total))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, nargs="+", default=Config().nvars)
    ap.add_argument("--degrees", type=int, nargs="+", default=Config().degrees)
    ap.add_argument("--trials", type=int, default=Config.trials)
    ap.add_argument("--min-size", type=float, default=Config.min_size)
    ap.add_argument("--workers", type=int, default=Config.workers)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    cfg = Config(a.vars, a.degrees, a.trials, min_size=a.min_size, workers=a.workers, seed=a.seed)
    print(f"{'k':>2} {'d':>3} {'#':>2} {'scheme':>8} {'seconds':>8} {'Z':>7} {'U':>7} {'ops':>12}")
    for r in run(cfg):
        print(f"{r['k']:>2} {r['d']:>3} {r['trial']:>2} {r['scheme']:>8} {r['seconds']:>8.2f} "
              f"{r['included']:>7} {r['undetermined']:>7} {r['ops']:>12}")


if __name__ == "__main__":
    main()
