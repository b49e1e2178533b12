"""Breadth-first subdivision over power-of-two grids.

All boxes alive at level l are cells of the uniform grid that cuts every
edge of the domain into 2**l parts, so one level is one CSF box set and is
evaluated in a single amortised sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import ivarray as iva
from .criteria import TaylorModel, taylor_batch, vertex_sign_batch
from .csf import CsfTree, _from_sorted, csf_build
from .errors import ArityMismatch, IndexOutOfRange, InvalidThreshold, UnsupportedOrder
from .fasteval import CompiledPoly, evaluate_boxes
from .interval import Interval, _from_exact
from .opcount import OpCounter
from .poly import SparsePoly

INCLUDED, UNDETERMINED, EXCLUDED = "Z", "U", "X"


def _step(a: float, b: float, n: int) -> Interval:
    return _from_exact((Fraction(b) - Fraction(a)) / n, (Fraction(b) - Fraction(a)) / n)


def _positions(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Enclosures of the n + 1 cut points a + t (b - a) / n."""
    w = _step(a, b, n)
    t = np.arange(n + 1, dtype=float)
    mlo, mhi = iva.mul(t, t, np.full_like(t, w.lo), np.full_like(t, w.hi))
    return iva.add(np.full_like(t, a), np.full_like(t, a), mlo, mhi)


def axis_partition(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper endpoints of the n equal parts of [a, b], rounded outward."""
    if n < 1:
        raise ValueError("an axis needs at least one part")
    plo, phi = _positions(float(a), float(b), n)
    return plo[:-1].copy(), phi[1:].copy()


def _domain(domain) -> tuple[Interval, ...]:
    out = []
    for d in domain:
        if isinstance(d, Interval):
            out.append(d)
        else:
            lo, hi = d
            out.append(Interval(float(lo), float(hi)))
    return tuple(out)


def box_of_index(domain, level: int, idx: Sequence[int]) -> tuple[Interval, ...]:
    """The cell ``idx`` of the level-``level`` grid on ``domain``."""
    domain = _domain(domain)
    if len(idx) != len(domain):
        raise ArityMismatch(f"index has {len(idx)} components, domain has {len(domain)}")
    n = 1 << level
    out = []
    for d, t in zip(domain, idx):
        if not 0 <= t < n:
            raise IndexOutOfRange(f"index component {t} outside 0..{n - 1}")
        w = _step(d.lo, d.hi, n)
        a = Interval._raw(d.lo, d.lo)
        lo = a + Interval._raw(float(t), float(t)) * w
        hi = a + Interval._raw(float(t + 1), float(t + 1)) * w
        out.append(Interval._raw(lo.lo, hi.hi))
    return tuple(out)


@dataclass(frozen=True)
class LevelGrid:
    """Per-axis cell and vertex enclosures of one subdivision level."""

    level: int
    cell_lo: tuple
    cell_hi: tuple
    vert_lo: tuple
    vert_hi: tuple

    @classmethod
    def build(cls, domain: tuple[Interval, ...], level: int) -> "LevelGrid":
        n = 1 << level
        pos = [_positions(d.lo, d.hi, n) for d in domain]
        return cls(
            level,
            tuple(p[0][:-1] for p in pos),
            tuple(p[1][1:] for p in pos),
            tuple(p[0] for p in pos),
            tuple(p[1] for p in pos),
        )


@dataclass(frozen=True)
class BoxSet:
    """The boxes of one level, as a CSF tree of grid indices."""

    level: int
    tree: CsfTree

    @classmethod
    def from_indices(cls, level: int, indices, k: int | None = None) -> "BoxSet":
        arr = np.asarray(indices, dtype=np.int64)
        if k is None:
            k = arr.shape[1]
        arr = arr.reshape(-1, k)
        if arr.size and (arr.min() < 0 or arr.max() >= (1 << level)):
            raise IndexOutOfRange(f"box index outside the level-{level} grid")
        return cls(level, csf_build(arr, k=k))

    @classmethod
    def root(cls, k: int) -> "BoxSet":
        return cls.from_indices(0, [(0,) * k], k)

    @property
    def k(self) -> int:
        return self.tree.depth

    @property
    def indices(self) -> np.ndarray:
        return self.tree.tuples

    def __len__(self) -> int:
        return len(self.tree)

    def select(self, mask: np.ndarray) -> "BoxSet":
        return BoxSet(self.level, _from_sorted(self.indices[mask], k=self.k))


def bisect(S: BoxSet) -> BoxSet:
    """Replace every box by its 2**k children on the next level."""
    k = S.k
    corners = np.array(np.meshgrid(*([[0, 1]] * k), indexing="ij")).reshape(k, -1).T
    kids = (2 * S.indices[:, None, :] + corners[None, :, :]).reshape(-1, k)
    if kids.size:
        kids = kids[np.lexsort(kids.T[::-1])]
    return BoxSet(S.level + 1, _from_sorted(kids, k=k))


@dataclass
class SolveOptions:
    scheme: str = "taylor"  # "interval" or "taylor"
    taylor_order: int = 2
    workers: int = 1
    keep_excluded: bool = False
    extra_depth: int = 4  # levels past the threshold when max_depth is not given

    def __post_init__(self):
        if self.scheme not in ("interval", "taylor"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not 1 <= self.taylor_order <= 3:
            raise UnsupportedOrder(f"Taylor order {self.taylor_order} not in 1..3")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class LevelStats:
    level: int
    boxes: int = 0
    excluded: int = 0
    included: int = 0
    undetermined: int = 0
    bisected: int = 0
    ops: OpCounter = field(default_factory=OpCounter)

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "boxes": self.boxes,
            "excluded": self.excluded,
            "included": self.included,
            "undetermined": self.undetermined,
            "bisected": self.bisected,
            "adds": self.ops.adds,
            "muls": self.ops.muls,
            "pows": self.ops.pows,
        }


@dataclass
class Enclosure:
    """Boxes covering the solution set, addressed by (level, grid index)."""

    domain: tuple
    included: list = field(default_factory=list)
    undetermined: list = field(default_factory=list)
    stats: list = field(default_factory=list)
    excluded: list | None = None

    @property
    def k(self) -> int:
        return len(self.domain)

    def __len__(self) -> int:
        return len(self.included) + len(self.undetermined)

    def records(self) -> list[tuple[str, int, tuple]]:
        """(status, level, index) for every output box, sorted by level then index."""
        out = [(INCLUDED, lv, idx) for lv, idx in self.included]
        out += [(UNDETERMINED, lv, idx) for lv, idx in self.undetermined]
        return sorted(out, key=lambda r: (r[1], r[2], r[0]))

    def box(self, level: int, idx) -> tuple[Interval, ...]:
        return box_of_index(self.domain, level, idx)

    def covers(self, point) -> bool:
        # float vs Fraction comparisons are exact
        for _, lv, idx in self.records():
            if all(b.lo <= p <= b.hi for b, p in zip(self.box(lv, idx), point)):
                return True
        return False

    def total_ops(self) -> OpCounter:
        c = OpCounter()
        for s in self.stats:
            c.merge(s.ops)
        return c


def threshold_level(domain: tuple[Interval, ...], min_size: float) -> int:
    """First level whose nominal box width is below ``min_size``."""
    width = max(Fraction(d.hi) - Fraction(d.lo) for d in domain)
    eps = Fraction(min_size)
    level = 0
    while width / (1 << level) >= eps:
        level += 1
    return level


class _Poly:
    """One constraint prepared for the level sweeps."""

    def __init__(self, F: SparsePoly, options: SolveOptions, equation: bool):
        self.poly = F
        self.equation = equation
        self.compiled = CompiledPoly(F)
        self.model = TaylorModel(F, options.taylor_order) if options.scheme == "taylor" else None
        self.cost = sum(s.cost for s in self.compiled.steps)

    def enclose(self, S: BoxSet, grid: LevelGrid, counter, workers):
        if self.model is None:
            lo, hi = evaluate_boxes(self.compiled, S.tree, grid.cell_lo, grid.cell_hi, counter, workers)
            return lo, hi, None
        batch = taylor_batch(self.model, S.tree, grid.cell_lo, grid.cell_hi, counter, workers)
        lo, hi = batch.enclosure()
        return lo, hi, batch

    def keep(self, lo, hi) -> np.ndarray:
        if self.equation:
            return (lo <= 0.0) & (hi >= 0.0)
        return lo <= 0.0


def subdivide_enclose(
    F_list: Sequence[SparsePoly],
    ineq_list: Sequence[SparsePoly] = (),
    domain=None,
    min_size: float = 2.0**-5,
    max_depth: int | None = None,
    options: SolveOptions | None = None,
) -> Enclosure:
    """Enclose the solutions of {F = 0 for F in F_list, g <= 0 for g in ineq_list}.

    Boxes are discarded when an enclosure proves an equation non-vanishing or
    an inequality violated.  With a single equation and no inequality, boxes
    narrower than ``min_size`` with a certified sign change are reported as
    included; the others are bisected until ``max_depth`` and then reported
    as undetermined.  With several constraints, the survivors of the first
    level narrower than ``min_size`` are reported as undetermined.
    """
    options = options or SolveOptions()
    polys = list(F_list) + list(ineq_list)
    if not polys:
        raise ArityMismatch("no equation or inequality given")
    k = polys[0].nvars
    if any(p.nvars != k for p in polys):
        raise ArityMismatch("constraints have different numbers of variables")
    domain = _domain(domain if domain is not None else [(-2.0, 2.0)] * k)
    if len(domain) != k:
        raise ArityMismatch(f"domain has {len(domain)} axes, constraints have {k} variables")
    if not (isinstance(min_size, (int, float, Fraction)) and math.isfinite(min_size) and min_size > 0):
        raise InvalidThreshold(f"threshold must be positive, got {min_size!r}")
    eps_level = threshold_level(domain, min_size)
    if max_depth is None:
        max_depth = eps_level + options.extra_depth
    if max_depth < 0:
        raise InvalidThreshold("max_depth must be >= 0")
    certify = len(F_list) == 1 and not ineq_list

    cons = [_Poly(F, options, True) for F in F_list] + [_Poly(g, options, False) for g in ineq_list]
    cons.sort(key=lambda c: c.cost)  # stable: ties keep input order
    result = Enclosure(domain, excluded=[] if options.keep_excluded else None)
    grids = lru_cache(maxsize=None)(lambda lv: LevelGrid.build(domain, lv))

    S = BoxSet.root(k)
    while len(S):
        grid = grids(S.level)
        st = LevelStats(S.level, boxes=len(S))
        result.stats.append(st)
        batch = None
        for c in cons:
            lo, hi, batch = c.enclose(S, grid, st.ops, options.workers)
            keep = c.keep(lo, hi)
            if not keep.all():
                if result.excluded is not None:
                    result.excluded += [(S.level, tuple(t)) for t in S.indices[~keep].tolist()]
                st.excluded += int((~keep).sum())
                S = S.select(keep)
                if batch is not None:
                    batch = batch.subset(keep)
            if not len(S):
                break
        if not len(S):
            break
        small = S.level >= eps_level
        if small and certify:
            c = cons[0]
            ok = vertex_sign_batch(c.compiled, S.indices, grid.vert_lo, grid.vert_hi, st.ops, options.workers)
            if batch is not None and options.taylor_order >= 2:
                ok |= batch.linear_test()
            if ok.any():
                result.included += [(S.level, tuple(t)) for t in S.indices[ok].tolist()]
                st.included = int(ok.sum())
                S = S.select(~ok)
        if not len(S):
            break
        if (small and not certify) or S.level >= max_depth:
            result.undetermined += [(S.level, tuple(t)) for t in S.indices.tolist()]
            st.undetermined = len(S)
            break
        st.bisected = len(S)
        S = bisect(S)
    return result
