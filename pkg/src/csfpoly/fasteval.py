"""Level-synchronous, numpy-vectorised interval version of ``evaluate_csf``.

At depth d every node of the box tree owns the coefficient row of its
partially evaluated polynomial, indexed by the distinct exponent suffixes of
length k - d.  Going one level down gathers the parents' rows, runs the
sparse Hörner recurrence on all children at once and produces rows indexed
by the suffixes of length k - d - 1.  The arithmetic (shared power table,
Hörner order, final x**e0 factor) is exactly that of ``partial_eval``, so
payloads match the scalar engine bit for bit, except that exactly-zero
coefficients are carried along instead of being dropped.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import ivarray as iva
from .csf import CsfTree
from .errors import ArityMismatch, IndexOutOfRange
from .interval import Interval, pow_cost
from .opcount import OpCounter
from .poly import SparsePoly

DEFAULT_BUDGET = 1 << 21  # interval entries per working matrix


@dataclass
class _Step:
    n_in: int
    n_out: int
    top_cols: np.ndarray
    rounds: list  # (groups, power ids, input cols, uniform power id or -1)
    e0_groups: np.ndarray
    e0_ids: np.ndarray
    powers: list  # exponents of the power table, by id
    adds: int
    muls: int
    pows: int

    @property
    def cost(self) -> int:
        return self.adds + self.muls + self.pows

    def apply(self, Clo, Chi, Xlo, Xhi):
        table = []
        for e in self.powers:
            table.append((Xlo, Xhi) if e == 1 else iva.pow(Xlo, Xhi, e))
        Jlo = Clo[:, self.top_cols]
        Jhi = Chi[:, self.top_cols]
        for groups, pids, cols, uni in self.rounds:
            if uni >= 0:
                plo = table[uni][0][:, None]
                phi = table[uni][1][:, None]
            else:
                plo = np.stack([table[p][0] for p in pids], axis=1)
                phi = np.stack([table[p][1] for p in pids], axis=1)
            mlo, mhi = iva.mul(Jlo[:, groups], Jhi[:, groups], plo, phi)
            Jlo[:, groups], Jhi[:, groups] = iva.add(mlo, mhi, Clo[:, cols], Chi[:, cols])
        if self.e0_groups.size:
            plo = np.stack([table[p][0] for p in self.e0_ids], axis=1)
            phi = np.stack([table[p][1] for p in self.e0_ids], axis=1)
            g = self.e0_groups
            Jlo[:, g], Jhi[:, g] = iva.mul(Jlo[:, g], Jhi[:, g], plo, phi)
        return Jlo, Jhi


def _build_step(suffixes: list[tuple]) -> tuple[_Step, list[tuple]]:
    col = {s: i for i, s in enumerate(suffixes)}
    groups: dict[tuple, list] = {}
    for s in suffixes:
        groups.setdefault(s[1:], []).append((s[0], col[s]))
    tails = sorted(groups)
    slices = [groups[t] for t in tails]  # each sorted by exponent
    powers: set[int] = set()
    adds = muls = 0
    rounds_raw: dict[int, list] = {}
    e0g, e0e = [], []
    for gi, sl in enumerate(slices):
        L = len(sl)
        for s in range(1, L):
            e_hi, e_lo = sl[L - s][0], sl[L - 1 - s][0]
            rounds_raw.setdefault(s, []).append((gi, e_hi - e_lo, sl[L - 1 - s][1]))
            powers.add(e_hi - e_lo)
        adds += L - 1
        muls += L - 1
        if sl[0][0] > 0:
            muls += 1
            e0g.append(gi)
            e0e.append(sl[0][0])
            powers.add(sl[0][0])
    plist = sorted(powers)
    pid = {e: i for i, e in enumerate(plist)}
    rounds = []
    for s in sorted(rounds_raw):
        items = rounds_raw[s]
        g = np.array([i[0] for i in items], dtype=np.int64)
        p = np.array([pid[i[1]] for i in items], dtype=np.int64)
        c = np.array([i[2] for i in items], dtype=np.int64)
        uni = int(p[0]) if (p == p[0]).all() else -1
        rounds.append((g, p, c, uni))
    step = _Step(
        n_in=len(suffixes),
        n_out=len(tails),
        top_cols=np.array([sl[-1][1] for sl in slices], dtype=np.int64),
        rounds=rounds,
        e0_groups=np.array(e0g, dtype=np.int64),
        e0_ids=np.array([pid[e] for e in e0e], dtype=np.int64),
        powers=plist,
        adds=adds,
        muls=muls,
        pows=sum(pow_cost(e) for e in plist if e > 1),
    )
    return step, tails


class CompiledPoly:
    """A polynomial prepared for vectorised evaluation on box trees."""

    def __init__(self, F: SparsePoly):
        self.poly = F
        self.k = F.nvars
        ivs = [Interval.coerce(c) for _, c in F.terms]
        self.coef_lo = np.array([v.lo for v in ivs], dtype=float).reshape(1, -1)
        self.coef_hi = np.array([v.hi for v in ivs], dtype=float).reshape(1, -1)
        self.steps: list[_Step] = []
        suffixes = [e for e, _ in F.terms]
        if suffixes:
            for _ in range(self.k):
                step, suffixes = _build_step(suffixes)
                self.steps.append(step)

    def cost_per_node(self, d: int) -> int:
        """Operations spent on each node at depth d + 1."""
        return self.steps[d].cost if self.steps else 0


def _check(cp: CompiledPoly, tree: CsfTree, axes_lo) -> None:
    if cp.k != tree.depth or cp.k != len(axes_lo):
        raise ArityMismatch(f"polynomial has {cp.k} variables, box set depth {tree.depth}, grid arity {len(axes_lo)}")
    for d in range(tree.depth):
        lab = tree.labels[d]
        if lab.size and int(lab.max()) >= len(axes_lo[d]):
            raise IndexOutOfRange(f"box index {int(lab.max())} beyond axis {d} of length {len(axes_lo[d])}")


def _run_range(cp, tree, axes_lo, axes_hi, parents, u, v, budget, counter):
    out_lo: list[np.ndarray] = []
    out_hi: list[np.ndarray] = []
    k = cp.k

    def run(d, u, v, Clo, Chi, p_first):
        step = cp.steps[d]
        chunk = max(1, budget // max(step.n_in, step.n_out, 1))
        for a in range(u, v, chunk):
            b = min(v, a + chunk)
            par = parents[d][a:b] - p_first
            lab = tree.labels[d][a:b]
            Jlo, Jhi = step.apply(Clo[par], Chi[par], axes_lo[d][lab], axes_hi[d][lab])
            if counter is not None:
                counter.add(step.adds, step.muls, step.pows, times=b - a)
            if d == k - 1:
                out_lo.append(Jlo[:, 0])
                out_hi.append(Jhi[:, 0])
            else:
                run(d + 1, int(tree.ptr[d + 1][a]), int(tree.ptr[d + 1][b]), Jlo, Jhi, a)

    run(0, u, v, cp.coef_lo, cp.coef_hi, 0)
    return out_lo, out_hi


def evaluate_boxes(
    cp: CompiledPoly | SparsePoly,
    tree: CsfTree,
    axes_lo,
    axes_hi,
    counter: OpCounter | None = None,
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> tuple[np.ndarray, np.ndarray]:
    """Interval enclosures of the polynomial on every box of ``tree``.

    ``axes_lo[d][t]``, ``axes_hi[d][t]`` give the t-th interval of axis d.
    The result arrays follow the leaf order of ``tree``.  With ``workers > 1``
    the root children are split into contiguous ranges evaluated in threads;
    the output does not depend on the split.
    """
    if isinstance(cp, SparsePoly):
        cp = CompiledPoly(cp)
    _check(cp, tree, axes_lo)
    n = len(tree)
    if n == 0:
        return np.zeros(0), np.zeros(0)
    if not cp.steps:
        return np.zeros(n), np.zeros(n)
    parents = [tree.parents(d) for d in range(cp.k)]
    n_root = tree.labels[0].size
    workers = max(1, min(workers, n_root))
    if workers == 1:
        lo, hi = _run_range(cp, tree, axes_lo, axes_hi, parents, 0, n_root, budget, counter)
        return np.concatenate(lo), np.concatenate(hi)
    bounds = np.linspace(0, n_root, workers + 1).astype(int)
    counters = [OpCounter() for _ in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futs = [
            pool.submit(_run_range, cp, tree, axes_lo, axes_hi, parents, int(bounds[w]), int(bounds[w + 1]), budget, counters[w])
            for w in range(workers)
        ]
        parts = [f.result() for f in futs]
    if counter is not None:
        for c in counters:
            counter.merge(c)
    lo = np.concatenate([a for p in parts for a in p[0]])
    hi = np.concatenate([a for p in parts for a in p[1]])
    return lo, hi
