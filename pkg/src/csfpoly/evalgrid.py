"""Amortised evaluation of a polynomial over a grid of boxes.

``evaluate_csf`` is the scalar-generic engine: it walks the box-set CSF
tree, partially evaluating the polynomial once per node, and so works with
exact integers, Fractions, complex numbers and intervals alike.  The
vectorised interval engine in ``fasteval`` performs the same operations
level by level and is checked against this one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from .csf import CsfTree, csf_build
from .errors import ArityMismatch, IndexOutOfRange
from .interval import Interval
from .opcount import OpCounter
from .poly import SparsePoly, eval_univariate, partial_eval, zero_like

Box = Sequence[Interval]


@dataclass(frozen=True)
class Grid:
    """A Cartesian product X_1 x ... x X_k of scalar axes.

    Axis entries are usually Intervals (boxes) but may be any scalar:
    degenerate points, exact integers, complex roots of unity.
    """

    axes: tuple

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(tuple(a) for a in self.axes))

    @property
    def k(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    def box(self, idx: Sequence[int]) -> tuple:
        return tuple(self.axes[i][t] for i, t in enumerate(idx))

    @classmethod
    def uniform(cls, domain: Box, n: int | Sequence[int]) -> "Grid":
        """Split each edge of ``domain`` into ``n`` equal, outward-rounded parts."""
        from .subdivide import axis_partition

        domain = tuple(Interval.coerce(d) if not isinstance(d, Interval) else d for d in domain)
        ns = [n] * len(domain) if isinstance(n, int) else list(n)
        axes = []
        for d, m in zip(domain, ns):
            lo, hi = axis_partition(d.lo, d.hi, m)
            axes.append([Interval._raw(float(a), float(b)) for a, b in zip(lo, hi)])
        return cls(tuple(axes))

    def interval_arrays(self) -> tuple[list[np.ndarray], list[np.ndarray]]:
        los, his = [], []
        for ax in self.axes:
            ivs = [Interval.coerce(v) for v in ax]
            los.append(np.array([v.lo for v in ivs]))
            his.append(np.array([v.hi for v in ivs]))
        return los, his


@dataclass(frozen=True)
class EvalResult:
    """Evaluation payloads on the support of the evaluated box set."""

    tree: CsfTree

    @property
    def values(self) -> list:
        return list(self.tree.payloads)

    @cached_property
    def _index(self) -> dict:
        return dict(self.items())

    def __getitem__(self, idx) -> Any:
        return self._index[tuple(idx)]

    def items(self):
        return zip(map(tuple, self.tree.tuples.tolist()), self.tree.payloads)


def _check(F: SparsePoly, tree: CsfTree, grid: Grid) -> None:
    if F.nvars != tree.depth or F.nvars != grid.k:
        raise ArityMismatch(f"polynomial has {F.nvars} variables, box set depth {tree.depth}, grid arity {grid.k}")
    for d in range(tree.depth):
        lab = tree.labels[d]
        if lab.size and int(lab.max()) >= len(grid.axes[d]):
            raise IndexOutOfRange(f"box index {int(lab.max())} beyond axis {d} of length {len(grid.axes[d])}")


def evaluate_csf(F: SparsePoly, boxes, grid: Grid, counter: OpCounter | None = None) -> EvalResult:
    """Evaluate ``F`` on every box of a CSF box set.

    For each first-coordinate child ``i`` of the root, F is partially
    evaluated at the i-th interval of the first axis, and the result is
    recursively evaluated on the subtree.  Payloads come out in the leaf
    order of ``boxes``.
    """
    tree = boxes.tree if hasattr(boxes, "tree") else boxes
    _check(F, tree, grid)
    out: list = []
    k = tree.depth

    def rec(G: SparsePoly, d: int, j: int) -> None:
        # node j at depth d; its children carry indices into axis d
        axis = grid.axes[d]
        lab = tree.labels[d]
        for c in tree.children(d, j):
            x = axis[int(lab[c])]
            if d == k - 1:
                out.append(eval_univariate(G, x, counter))
            elif G.is_zero():
                n = len(tree.subtree_leaves(d + 1, c))
                out.extend(zero_like(x) for _ in range(n))
            else:
                rec(partial_eval(G, x, counter), d + 1, c)

    if len(tree):
        rec(F, 0, 0)
    return EvalResult(tree.with_payloads(out))


def eval_box_csf(F: SparsePoly, B: Sequence, counter: OpCounter | None = None):
    """Algorithm-2 evaluation of a single box (one partial evaluation per variable)."""
    grid = Grid(tuple((b,) for b in B))
    tree = csf_build([(0,) * len(B)])
    return evaluate_csf(F, tree, grid, counter).tree.payloads[0]


def evaluate_dense_grid(F: SparsePoly, grid: Grid, counter: OpCounter | None = None) -> np.ndarray:
    """Evaluate ``F`` on every box of a dense grid, sharing partial evaluations.

    Returns a k-dimensional object array indexed like the grid.
    """
    if F.nvars != grid.k:
        raise ArityMismatch(f"polynomial has {F.nvars} variables, grid arity {grid.k}")
    out = np.empty(grid.shape, dtype=object)

    def rec(G: SparsePoly, d: int, prefix: tuple) -> None:
        for i, x in enumerate(grid.axes[d]):
            if d == grid.k - 1:
                out[prefix + (i,)] = eval_univariate(G, x, counter)
            elif G.is_zero():
                sub = out[prefix + (i,)]
                sub.fill(zero_like(x))
            else:
                rec(partial_eval(G, x, counter), d + 1, prefix + (i,))

    rec(F, 0, ())
    return out
