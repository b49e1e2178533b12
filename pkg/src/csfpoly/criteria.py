"""Exclusion (C0) and inclusion (C1) predicates on boxes.

Each predicate exists in two shapes: a scalar one acting on a single box of
``Interval`` objects, and a batch one acting on every box of a ``BoxSet``
through the vectorised engine.  Both do the same arithmetic in the same
order and agree bit for bit, except when a partial evaluation yields an
exactly-zero coefficient (the scalar engine drops it, the vectorised one
carries it along); both are sound either way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import ivarray as iva
from .errors import ArityMismatch, UnsupportedOrder
from .evalgrid import Grid, eval_box_csf, evaluate_csf
from .fasteval import CompiledPoly, evaluate_boxes
from .interval import Interval, add_rd_ru, iv_geometry, iv_pow
from .opcount import OpCounter
from .poly import SparsePoly

MAX_TAYLOR_ORDER = 3

EXCLUDED, INCLUDED, UNKNOWN = "Excluded", "Included", "Unknown"


@dataclass(frozen=True)
class Verdict:
    status: str


def multi_indices(k: int, order: int) -> list[tuple[int, ...]]:
    """All multi-indices of total degree ``order`` in k variables, lexicographic."""
    out = [a for a in itertools.product(range(order + 1), repeat=k) if sum(a) == order]
    return sorted(out)


def scaled_derivative(F: SparsePoly, alpha: Sequence[int]) -> SparsePoly:
    """The polynomial (d^alpha F) / alpha!, with sound coefficients.

    Integer and Fraction coefficients stay exact; float coefficients become
    Intervals so that an inexact product with the binomial factor is still
    enclosed.
    """
    alpha = tuple(alpha)
    if len(alpha) != F.nvars:
        raise ArityMismatch("multi-index arity differs from the polynomial's")
    out = []
    for exp, c in F.terms:
        if any(e < a for e, a in zip(exp, alpha)):
            continue
        factor = 1
        for e, a in zip(exp, alpha):
            factor *= comb(e, a)
        if isinstance(c, (int, Fraction)):
            coef = c * factor
        elif factor == 1:
            coef = c
        else:
            coef = Interval.coerce(c) * Interval.coerce(factor)
        out.append((tuple(e - a for e, a in zip(exp, alpha)), coef))
    return SparsePoly(F.nvars, out)


def _monomial(h: Sequence[Interval], alpha: tuple[int, ...]) -> Interval | None:
    acc = None
    for hd, a in zip(h, alpha):
        if a:
            p = iv_pow(hd, a)
            acc = p if acc is None else acc * p
    return acc


def _taylor_sum(coefs: list[tuple[tuple, Interval]], h: Sequence[Interval]) -> Interval:
    acc = None
    for alpha, c in coefs:
        mono = _monomial(h, alpha)
        term = c if mono is None else c * mono
        acc = term if acc is None else acc + term
    return acc


@dataclass
class TaylorForm:
    """Taylor form of order m of F on a box B, centred at the midpoint.

    ``terms`` maps each multi-index of total degree < m to an enclosure of
    (d^alpha F)(c) / alpha! (thin up to rounding); ``remainder`` maps each
    multi-index of degree m to an enclosure of (d^alpha F)(B) / alpha!.
    """

    box: tuple
    center: tuple
    order: int
    terms: dict = field(default_factory=dict)
    remainder: dict = field(default_factory=dict)

    def _coefs(self):
        return list(self.terms.items()) + list(self.remainder.items())

    def _offsets(self, point) -> list[Interval]:
        out = []
        for p, c in zip(point, self.center):
            p = Interval.coerce(p)
            out.append(Interval(add_rd_ru(p.lo, -c)[0], add_rd_ru(p.hi, -c)[1]))
        return out

    def enclosure(self) -> Interval:
        """Range enclosure of F over the whole box."""
        return _taylor_sum(self._coefs(), self._offsets(self.box))

    def evaluate_at(self, point) -> Interval:
        """Enclosure of F(point) for a point (or sub-box) of the box."""
        return _taylor_sum(self._coefs(), self._offsets(point))

    def gradient(self) -> list[Interval]:
        k = len(self.center)
        return [self.terms[tuple(int(i == d) for i in range(k))] for d in range(k)]


def taylor_build(F: SparsePoly, B: Sequence[Interval], m: int = 2, counter: OpCounter | None = None) -> TaylorForm:
    if not 1 <= m <= MAX_TAYLOR_ORDER:
        raise UnsupportedOrder(f"Taylor order {m} not in 1..{MAX_TAYLOR_ORDER}")
    if len(B) != F.nvars:
        raise ArityMismatch(f"box has {len(B)} coordinates, polynomial has {F.nvars} variables")
    B = tuple(Interval.coerce(b) for b in B)
    center = tuple(iv_geometry(b)[0] for b in B)
    cpt = tuple(Interval._raw(c, c) for c in center)
    terms, rem = {}, {}
    for j in range(m + 1):
        for alpha in multi_indices(F.nvars, j):
            D = scaled_derivative(F, alpha)
            if j < m:
                terms[alpha] = Interval.coerce(eval_box_csf(D, cpt, counter))
            else:
                rem[alpha] = Interval.coerce(eval_box_csf(D, B, counter))
    return TaylorForm(B, center, m, terms, rem)


def enclose(F: SparsePoly, B: Sequence[Interval], scheme: str = "interval", order: int = 2,
            counter: OpCounter | None = None) -> Interval:
    """Range enclosure of F on B by plain interval evaluation or a Taylor form."""
    if scheme == "interval":
        return Interval.coerce(eval_box_csf(F, tuple(Interval.coerce(b) for b in B), counter))
    if scheme == "taylor":
        return taylor_build(F, B, order, counter).enclosure()
    raise ValueError(f"unknown scheme {scheme!r}")


def c0_exclude(F_list: Sequence[SparsePoly], ineq_list: Sequence[SparsePoly], B: Sequence[Interval],
               scheme: str = "interval", order: int = 2) -> bool:
    """True when some equation's enclosure misses 0 or some g <= 0 has g > 0 on B."""
    for F in F_list:
        if enclose(F, B, scheme, order).excludes_zero():
            return True
    for g in ineq_list:
        if enclose(g, B, scheme, order).lo > 0.0:
            return True
    return False


def box_vertices(B: Sequence[Interval]) -> dict:
    """Vertices of B keyed by their corner pattern in {0, 1}^k."""
    return {bits: tuple(Interval._raw(b.hi, b.hi) if s else Interval._raw(b.lo, b.lo) for b, s in zip(B, bits))
            for bits in itertools.product((0, 1), repeat=len(B))}


def c1_vertex_sign(F: SparsePoly, B: Sequence[Interval], vertex_values: dict | None = None) -> bool:
    """True when one vertex value is strictly negative and another strictly positive."""
    B = tuple(Interval.coerce(b) for b in B)
    if vertex_values is None:
        grid = Grid(tuple((Interval._raw(b.lo, b.lo), Interval._raw(b.hi, b.hi)) for b in B))
        corners = list(itertools.product((0, 1), repeat=len(B)))
        res = evaluate_csf(F, _corner_tree(len(B)), grid)
        vertex_values = dict(zip(corners, res.values))
    vals = [Interval.coerce(v) for v in vertex_values.values()]
    return any(v.hi < 0.0 for v in vals) and any(v.lo > 0.0 for v in vals)


def _corner_tree(k: int):
    from .csf import csf_build

    return csf_build(list(itertools.product((0, 1), repeat=k)))


def linear_vertices(grad: Sequence[Interval], B: Sequence[Interval]):
    """Vertices minimising and maximising the linear part; None if it vanishes.

    A gradient component whose enclosure contains 0 takes the lower endpoint
    for both vertices.
    """
    vmin, vmax = [], []
    signed = False
    for g, b in zip(grad, B):
        if g.lo > 0.0:
            vmin.append(b.lo), vmax.append(b.hi)
            signed = True
        elif g.hi < 0.0:
            vmin.append(b.hi), vmax.append(b.lo)
            signed = True
        else:
            vmin.append(b.lo), vmax.append(b.lo)
    if not signed:
        return None
    return tuple(vmin), tuple(vmax)


def c1_taylor_linear(tf: TaylorForm, B: Sequence[Interval] | None = None) -> bool:
    """Sign change certified at the vertices extremising the Taylor linear part."""
    if tf.order < 2:
        raise UnsupportedOrder("the linear-part inclusion test needs a Taylor form of order >= 2")
    B = tf.box if B is None else tuple(Interval.coerce(b) for b in B)
    verts = linear_vertices(tf.gradient(), B)
    if verts is None:
        return False
    fmin = tf.evaluate_at(verts[0])
    fmax = tf.evaluate_at(verts[1])
    return (fmin.hi < 0.0 and fmax.lo > 0.0) or (fmin.lo > 0.0 and fmax.hi < 0.0)


# ---------------------------------------------------------------------------
# batch versions over a level of the subdivision


class TaylorModel:
    """Compiled scaled derivatives of one polynomial, up to a given order."""

    def __init__(self, F: SparsePoly, order: int):
        if not 1 <= order <= MAX_TAYLOR_ORDER:
            raise UnsupportedOrder(f"Taylor order {order} not in 1..{MAX_TAYLOR_ORDER}")
        self.poly = F
        self.order = order
        self.alphas = [a for j in range(order + 1) for a in multi_indices(F.nvars, j)]
        self.compiled = {a: CompiledPoly(scaled_derivative(F, a)) for a in self.alphas}


@dataclass
class TaylorBatch:
    """Taylor forms of one polynomial on all boxes of a tree."""

    model: TaylorModel
    coefs: list  # (alpha, lo array, hi array) in summation order
    center: list  # per axis: centre of each box, shape (n,)
    box_lo: list
    box_hi: list

    def subset(self, mask: np.ndarray) -> "TaylorBatch":
        return TaylorBatch(
            self.model,
            [(a, lo[mask], hi[mask]) for a, lo, hi in self.coefs],
            [c[mask] for c in self.center],
            [b[mask] for b in self.box_lo],
            [b[mask] for b in self.box_hi],
        )

    def _sum(self, hlo, hhi):
        acc = None
        for alpha, clo, chi in self.coefs:
            mono = None
            for d, a in enumerate(alpha):
                if a:
                    p = iva.pow(hlo[d], hhi[d], a)
                    mono = p if mono is None else iva.mul(mono[0], mono[1], p[0], p[1])
            term = (clo, chi) if mono is None else iva.mul(clo, chi, mono[0], mono[1])
            acc = term if acc is None else iva.add(acc[0], acc[1], term[0], term[1])
        return acc

    def _offsets(self, plo, phi):
        hlo = [iva.add_rd(plo[d], -self.center[d]) for d in range(len(plo))]
        hhi = [iva.add_ru(phi[d], -self.center[d]) for d in range(len(phi))]
        return hlo, hhi

    def enclosure(self):
        with np.errstate(all="ignore"):
            return self._sum(*self._offsets(self.box_lo, self.box_hi))

    def linear_test(self) -> np.ndarray:
        k = len(self.center)
        grads = {a: (lo, hi) for a, lo, hi in self.coefs if sum(a) == 1}
        vmin, vmax = [], []
        signed = np.zeros(self.center[0].shape, dtype=bool)
        for d in range(k):
            glo, ghi = grads[tuple(int(i == d) for i in range(k))]
            pos, neg = glo > 0.0, ghi < 0.0
            signed |= pos | neg
            vmin.append(np.where(neg, self.box_hi[d], self.box_lo[d]))
            vmax.append(np.where(pos, self.box_hi[d], self.box_lo[d]))
        with np.errstate(all="ignore"):
            fmin = self._sum(*self._offsets(vmin, vmin))
            fmax = self._sum(*self._offsets(vmax, vmax))
        ok = ((fmin[1] < 0.0) & (fmax[0] > 0.0)) | ((fmin[0] > 0.0) & (fmax[1] < 0.0))
        return ok & signed


def taylor_batch(model: TaylorModel, tree, axes_lo, axes_hi, counter=None, workers: int = 1) -> TaylorBatch:
    k = model.poly.nvars
    cax = [iva.midpoint(axes_lo[d], axes_hi[d]) for d in range(k)]
    coefs = []
    for alpha in model.alphas:
        if sum(alpha) < model.order:
            lo, hi = evaluate_boxes(model.compiled[alpha], tree, cax, cax, counter, workers)
        else:
            lo, hi = evaluate_boxes(model.compiled[alpha], tree, axes_lo, axes_hi, counter, workers)
        coefs.append((alpha, lo, hi))
    idx = tree.tuples
    return TaylorBatch(
        model,
        coefs,
        [cax[d][idx[:, d]] for d in range(k)],
        [axes_lo[d][idx[:, d]] for d in range(k)],
        [axes_hi[d][idx[:, d]] for d in range(k)],
    )


def vertex_sign_batch(cp: CompiledPoly, idx: np.ndarray, vert_lo, vert_hi, counter=None, workers: int = 1) -> np.ndarray:
    """C1 by vertex signs for every box; vertices are evaluated once, as a grid subset."""
    from .csf import _from_sorted

    n, k = idx.shape
    if n == 0:
        return np.zeros(0, dtype=bool)
    corners = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64)
    allv = (idx[:, None, :] + corners[None, :, :]).reshape(-1, k)
    verts = np.unique(allv, axis=0)
    tree = _from_sorted(verts)
    lo, hi = evaluate_boxes(cp, tree, vert_lo, vert_hi, counter, workers)
    radix = int(len(vert_lo[0]))
    if k * radix.bit_length() < 62:
        w = radix ** np.arange(k - 1, -1, -1, dtype=np.int64)
        keys = verts @ w
        pos = np.searchsorted(keys, allv @ w)
    else:
        where = {tuple(v): i for i, v in enumerate(verts.tolist())}
        pos = np.array([where[tuple(v)] for v in allv.tolist()], dtype=np.int64)
    vlo = lo[pos].reshape(n, -1)
    vhi = hi[pos].reshape(n, -1)
    return (vhi < 0.0).any(axis=1) & (vlo > 0.0).any(axis=1)
