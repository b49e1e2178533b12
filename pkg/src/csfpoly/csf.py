"""Compressed Sparse Fiber trees over subsets of N^k.

The tree is stored level by level, as in sparse-tensor libraries:

* ``labels[d]`` holds the labels of the nodes at depth ``d + 1``, in
  lexicographic order of their root paths;
* ``ptr[d]`` has one entry per node at depth ``d`` plus a sentinel; the
  children of node ``j`` at depth ``d`` are the depth ``d + 1`` nodes
  ``ptr[d][j]:ptr[d][j + 1]`` (depth 0 is the root, a single node).

Leaves (depth ``k``) are in one-to-one correspondence with the support
tuples, and an optional payload sequence is aligned with them.  The sorted
tuple array is kept alongside the fibers since bisection and filtering are
most naturally written on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Sequence

import numpy as np

from .errors import ArityMismatch, DuplicateTuple, IndexOutOfRange


@dataclass(frozen=True, eq=False)
class CsfTree:
    depth: int
    labels: tuple  # of int64 arrays, one per depth 1..k
    ptr: tuple  # of int64 arrays, one per depth 0..k-1
    tuples: np.ndarray  # (n, k), sorted, unique
    payloads: Any = None

    def __len__(self) -> int:
        return self.tuples.shape[0]

    @property
    def root_labels(self) -> np.ndarray:
        return self.labels[0]

    def children(self, d: int, j: int) -> range:
        """Indices (into ``labels[d]``) of the children of node ``j`` at depth ``d``."""
        return range(int(self.ptr[d][j]), int(self.ptr[d][j + 1]))

    def subtree_leaves(self, d: int, j: int) -> range:
        """Leaf range under node ``j`` at depth ``d``."""
        lo, hi = j, j + 1
        for dd in range(d, self.depth):
            lo, hi = int(self.ptr[dd][lo]), int(self.ptr[dd][hi])
        return range(lo, hi)

    def parents(self, d: int) -> np.ndarray:
        """For each node at depth ``d + 1``, the index of its parent at depth ``d``."""
        counts = np.diff(self.ptr[d])
        return np.repeat(np.arange(counts.size), counts)

    def with_payloads(self, payloads) -> "CsfTree":
        if payloads is not None and len(payloads) != len(self):
            raise ValueError("payload count does not match support size")
        return CsfTree(self.depth, self.labels, self.ptr, self.tuples, payloads)

    def dump(self) -> str:
        return csf_dump(self)


def _from_sorted(arr: np.ndarray, payloads=None, k: int | None = None) -> CsfTree:
    """Build from a lexicographically sorted (n, k) array with unique rows."""
    n = arr.shape[0]
    k = arr.shape[1] if k is None else k
    if n == 0:
        empty = np.zeros(0, dtype=np.int64)
        ptr = (np.zeros(2, dtype=np.int64),) + tuple(np.zeros(1, dtype=np.int64) for _ in range(k - 1))
        return CsfTree(k, tuple(empty for _ in range(k)), ptr, arr.reshape(0, k), payloads)
    first = np.ones((n, k), dtype=bool)
    if n > 1:
        first[1:] = np.logical_or.accumulate(arr[1:] != arr[:-1], axis=1)
        if not first[1:, k - 1].all():
            r = int(np.flatnonzero(~first[1:, k - 1])[0]) + 1
            raise DuplicateTuple(tuple(int(v) for v in arr[r]))
    rows = [np.flatnonzero(first[:, d]) for d in range(k)]
    labels = tuple(arr[rows[d], d].astype(np.int64, copy=False) for d in range(k))
    ptr = [np.array([0, rows[0].size], dtype=np.int64)]
    for d in range(k - 1):
        p = np.searchsorted(rows[d + 1], rows[d])
        ptr.append(np.append(p, rows[d + 1].size).astype(np.int64))
    return CsfTree(k, labels, tuple(ptr), arr, payloads)


def csf_build(tuples, payloads: Sequence | None = None, k: int | None = None) -> CsfTree:
    """Build a CSF tree from k-tuples of non-negative integers.

    ``payloads``, when given, is aligned with ``tuples`` and reordered along
    with them.  ``k`` is only needed for an empty input.
    """
    if isinstance(tuples, np.ndarray):
        arr = tuples.astype(np.int64, copy=False)
        if arr.ndim != 2:
            raise ArityMismatch("expected an (n, k) array of tuples")
    else:
        tuples = [tuple(t) for t in tuples]
        if not tuples:
            if k is None:
                raise ArityMismatch("cannot infer arity of an empty tuple set")
            return _from_sorted(np.zeros((0, k), dtype=np.int64), [] if payloads is not None else None, k)
        arity = len(tuples[0])
        for t in tuples:
            if len(t) != arity:
                raise ArityMismatch(f"tuple {t} has arity {len(t)}, expected {arity}")
        arr = np.array(tuples, dtype=np.int64).reshape(len(tuples), arity)
    if k is not None and arr.shape[1] != k:
        raise ArityMismatch(f"tuples have arity {arr.shape[1]}, expected {k}")
    if arr.shape[1] < 1:
        raise ArityMismatch("arity must be at least 1")
    if (arr < 0).any():
        raise ValueError("CSF labels must be non-negative")
    order = np.lexsort(arr.T[::-1]) if arr.shape[0] > 1 else np.arange(arr.shape[0])
    arr = np.ascontiguousarray(arr[order])
    if payloads is not None:
        if len(payloads) != len(order):
            raise ValueError("payload count does not match tuple count")
        if isinstance(payloads, np.ndarray):
            payloads = payloads[order]
        else:
            payloads = [payloads[i] for i in order]
    return _from_sorted(arr, payloads)


def csf_projection_count(t: CsfTree, i: int) -> int:
    """N_i: number of distinct length-i prefixes, i.e. nodes at depth i."""
    if not 1 <= i <= t.depth:
        raise IndexOutOfRange(f"projection length {i} outside 1..{t.depth}")
    return int(t.labels[i - 1].size)


def csf_reverse_projection_count(t: CsfTree, i: int) -> int:
    """Ñ_i: number of distinct length-i suffixes of the support."""
    if not 1 <= i <= t.depth:
        raise IndexOutOfRange(f"projection length {i} outside 1..{t.depth}")
    k = t.depth
    return len({tup[k - i:] for tup, _ in csf_iterate(t)})


def csf_iterate(t: CsfTree) -> Iterator[tuple[tuple[int, ...], Any]]:
    """Yield (tuple, payload) for every support element, lexicographically."""
    pay = t.payloads
    for r, row in enumerate(t.tuples.tolist()):
        yield tuple(row), (None if pay is None else pay[r])


def csf_dump(t: CsfTree) -> str:
    """Indented text dump, one node per line: ``depth label [payload]``."""
    lines: list[str] = []
    pay = t.payloads

    def walk(d: int, j: int) -> None:
        # node j at depth d (d >= 1)
        indent = "  " * (d - 1)
        label = int(t.labels[d - 1][j])
        if d == t.depth:
            extra = "" if pay is None else f" {pay[j]}"
            lines.append(f"{indent}{d} {label}{extra}")
            return
        lines.append(f"{indent}{d} {label}")
        for c in t.children(d, j):
            walk(d + 1, c)

    for j in t.children(0, 0):
        walk(1, j)
    return "\n".join(lines) + ("\n" if lines else "")
