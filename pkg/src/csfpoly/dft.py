"""Discrete Fourier transform as amortised evaluation of a multilinear polynomial.

For a size N = 2**K input u, write a coefficient index in binary and let
variable m carry bit K - m:

    F(x_1, ..., x_K) = sum_n u_n * prod_m x_m ** bit(n, K - m)

Output j is F at the point whose m-th coordinate is w_m ** (j mod 2**m),
w_m = exp(-2 pi i / 2**m); indeed sum_m 2**(K-m) (j mod 2**m) bit(n, K-m)
is congruent to j * n modulo 2**K.  The N points, indexed by
(j mod 2, j mod 4, ..., j mod N), form a CSF set with 2**m nodes at depth m,
so the generic engine spends O(N log N) operations on them.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .csf import CsfTree, csf_build
from .errors import NotPowerOfTwo
from .evalgrid import Grid, evaluate_csf
from .opcount import OpCounter
from .poly import SparsePoly


def _log2(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise NotPowerOfTwo(f"size {n} is not a power of two >= 2")
    return n.bit_length() - 1


@dataclass(frozen=True)
class DftInstance:
    size: int
    poly: SparsePoly
    grid: Grid
    points: CsfTree

    @classmethod
    def build(cls, u: Sequence[complex]) -> "DftInstance":
        N = len(u)
        K = _log2(N)
        terms = []
        for n, c in enumerate(u):
            exp = tuple((n >> (K - m)) & 1 for m in range(1, K + 1))
            terms.append((exp, complex(c)))
        poly = SparsePoly(K, terms)
        axes = tuple(tuple(cmath.exp(-2j * cmath.pi * t / (1 << m)) for t in range(1 << m)) for m in range(1, K + 1))
        pts = csf_build([tuple(j % (1 << m) for m in range(1, K + 1)) for j in range(N)])
        return cls(N, poly, Grid(axes), pts)


def dft_csf(u: Sequence[complex], counter: OpCounter | None = None) -> np.ndarray:
    """v_k = sum_j u_j exp(-2 pi i k j / N), for N a power of two."""
    inst = DftInstance.build(u)
    res = evaluate_csf(inst.poly, inst.points, inst.grid, counter)
    v = np.zeros(inst.size, dtype=complex)
    last = inst.points.tuples[:, -1]
    v[last] = np.array([complex(p) for p in res.tree.payloads], dtype=complex)
    return v


def dft_naive(u: Sequence[complex], block: int = 256) -> np.ndarray:
    """Direct O(N^2) sum, with k * j reduced modulo N before the exponential."""
    u = np.asarray(u, dtype=complex)
    N = len(u)
    j = np.arange(N)
    out = np.empty(N, dtype=complex)
    for a in range(0, N, block):
        k = np.arange(a, min(N, a + block))
        W = np.exp(-2j * np.pi * ((k[:, None] * j[None, :]) % N) / N)
        out[a : a + len(k)] = W @ u
    return out
