"""Sparse multivariate polynomials stored on CSF trees.

Coefficients can be any scalar supporting ``+``, ``*`` and integer powers:
ints and Fractions (exact), floats, complex numbers or ``Interval``.
Variables are numbered from 0; variable ``i`` is depth ``i + 1`` of the tree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Sequence

from .csf import CsfTree, csf_build
from .errors import ArityMismatch, DuplicateTuple, EmptyPolynomial, IndexOutOfRange, PolySyntaxError, Univariate
from .interval import Interval, iv_pow, pow_cost
from .opcount import OpCounter

Exponent = tuple[int, ...]
# a univariate sparse polynomial: (exponent, coefficient) pairs, exponents increasing
UnivariateSlice = Sequence[tuple[int, Any]]


def _is_zero(c) -> bool:
    return c == 0


def scalar_pow(x, e: int):
    if isinstance(x, Interval):
        return iv_pow(x, e)
    return x**e


def zero_like(x):
    if isinstance(x, Interval):
        return Interval._raw(0.0, 0.0)
    return x * 0


def like(v, x):
    """Coerce a bare coefficient ``v`` to the scalar kind of ``x``."""
    if isinstance(x, Interval) and not isinstance(v, Interval):
        return Interval.coerce(v)
    return v


def _slice_plan(pairs: UnivariateSlice) -> tuple[set[int], int, int]:
    """Exponents needing a power table entry, plus (adds, muls) of one Hörner pass."""
    need: set[int] = set()
    prev = pairs[-1][0]
    for e, _ in reversed(pairs[:-1]):
        if prev - e > 1:
            need.add(prev - e)
        prev = e
    e0 = pairs[0][0]
    if e0 > 1:
        need.add(e0)
    n = len(pairs) - 1
    return need, n, n + (1 if e0 > 0 else 0)


def _power_table(x, need: Iterable[int]) -> dict[int, Any]:
    table = {1: x}
    for g in need:
        table[g] = scalar_pow(x, g)
    return table


def _horner(pairs: UnivariateSlice, table: dict[int, Any]):
    e_prev, acc = pairs[-1]
    for idx in range(len(pairs) - 2, -1, -1):
        e, a = pairs[idx]
        acc = acc * table[e_prev - e] + a
        e_prev = e
    if e_prev > 0:
        acc = acc * table[e_prev]
    return acc


def horner_sparse(f: UnivariateSlice, x, counter: OpCounter | None = None):
    """Sparse Hörner evaluation of sum a_j x**e_j at ``x``.

    The loop follows the classical scheme over the gaps e_{j+1} - e_j and
    ends with a multiplication by x**e_0, so that x**2 evaluates to x**2 and
    not to its cofactor.
    """
    if isinstance(f, SparsePoly):
        if f.nvars != 1:
            raise ArityMismatch("horner_sparse needs a univariate polynomial")
        f = [(e[0], c) for e, c in f.terms]
    if not f:
        raise EmptyPolynomial("cannot evaluate an empty univariate slice")
    need, adds, muls = _slice_plan(f)
    if counter is not None:
        counter.add(adds=adds, muls=muls, pows=sum(pow_cost(g) for g in need))
    return like(_horner(f, _power_table(x, need)), x)


class SparsePoly:
    """A polynomial in ``nvars`` variables with no stored zero coefficient."""

    __slots__ = ("nvars", "terms", "_tree", "_plan")

    def __init__(self, nvars: int, terms: Iterable[tuple[Exponent, Any]] | dict = (), *, check: bool = True):
        if nvars < 1:
            raise ArityMismatch("a polynomial needs at least one variable")
        self.nvars = nvars
        self._tree = None
        self._plan = None
        if isinstance(terms, dict):
            terms = terms.items()
        if not check:
            self.terms = tuple(terms)
            return
        seen: dict[Exponent, Any] = {}
        for exp, c in terms:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ArityMismatch(f"exponent {exp} has arity {len(exp)}, expected {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            if exp in seen:
                raise DuplicateTuple(exp)
            seen[exp] = c
        self.terms = tuple((e, c) for e, c in sorted(seen.items()) if not _is_zero(c))

    # -- structure --------------------------------------------------------
    @property
    def tree(self) -> CsfTree:
        if self._tree is None:
            exps = [e for e, _ in self.terms]
            self._tree = csf_build(exps, [c for _, c in self.terms], k=self.nvars)
        return self._tree

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, var: int) -> int:
        if not 0 <= var < self.nvars:
            raise IndexOutOfRange(f"variable {var} outside 0..{self.nvars - 1}")
        return max((e[var] for e, _ in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def n_prefix(self, i: int) -> int:
        """N_i(F): distinct length-i prefixes of the exponent vectors."""
        return len({e[:i] for e, _ in self.terms})

    def n_suffix(self, i: int) -> int:
        """Ñ_i(F): distinct length-i suffixes of the exponent vectors."""
        return len({e[self.nvars - i:] for e, _ in self.terms})

    def coefficient(self, exp: Exponent, default=0):
        for e, c in self.terms:
            if e == tuple(exp):
                return c
        return default

    def as_dict(self) -> dict[Exponent, Any]:
        return dict(self.terms)

    def map_coefficients(self, fn) -> "SparsePoly":
        return SparsePoly(self.nvars, [(e, fn(c)) for e, c in self.terms])

    def plan(self):
        """Slices grouped by exponent tail, for partial evaluation in variable 0.

        Returns ``(slices, need, adds, muls, pows)``: ``slices`` is a list of
        (tail, pairs) sorted by tail, ``need`` the exponents of the shared
        power table and the rest the per-call operation cost.
        """
        if self._plan is None:
            groups: dict[Exponent, list] = {}
            for exp, c in self.terms:
                groups.setdefault(exp[1:], []).append((exp[0], c))
            slices = sorted(groups.items())
            need: set[int] = set()
            adds = muls = 0
            for _, pairs in slices:
                n, a, m = _slice_plan(pairs)
                need |= n
                adds += a
                muls += m
            self._plan = (slices, sorted(need), adds, muls, sum(pow_cost(g) for g in need))
        return self._plan

    def __call__(self, *point):
        """Exact-as-the-scalars evaluation at a point (recursive Hörner)."""
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        return eval_box_direct(self, point)

    # -- comparisons / display -------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.terms))

    def __repr__(self) -> str:
        return f"SparsePoly({self.nvars}, {dict(self.terms)!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.terms:
            mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exp) if e)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def to_text(self) -> str:
        """Serialise in the monomial-list file format."""
        lines = []
        for exp, c in self.terms:
            coef = repr(float(c)) if isinstance(c, float) else str(c)
            lines.append(" ".join([coef, *map(str, exp)]))
        return "\n".join(lines) + "\n"


def partial_eval(F: SparsePoly, x1, counter: OpCounter | None = None) -> SparsePoly:
    """Substitute ``x1`` for variable 0, giving a polynomial in the others.

    Each exponent tail is a univariate slice in variable 0, evaluated by
    sparse Hörner; the powers of ``x1`` are computed once and shared by all
    slices.  Coefficients that come out exactly zero are dropped.
    """
    if F.nvars < 2:
        raise Univariate("partial_eval needs at least two variables; use horner_sparse")
    slices, need, adds, muls, pows = F.plan()
    if counter is not None:
        counter.add(adds=adds, muls=muls, pows=pows)
    table = _power_table(x1, need)
    out = []
    for tail, pairs in slices:
        v = _horner(pairs, table)
        if not _is_zero(v):
            out.append((tail, v))
    return SparsePoly(F.nvars - 1, out, check=False)


def eval_univariate(F: SparsePoly, x, counter: OpCounter | None = None):
    """Value of a univariate polynomial at ``x`` (zero of the right kind if F = 0)."""
    if F.is_zero():
        return zero_like(x)
    slices, need, adds, muls, pows = F.plan()
    if counter is not None:
        counter.add(adds=adds, muls=muls, pows=pows)
    return like(_horner(slices[0][1], _power_table(x, need)), x)


def eval_box_direct(F: SparsePoly, B: Sequence, counter: OpCounter | None = None):
    """Evaluate ``F`` on one box (or point) with no sharing between boxes.

    Variables are eliminated first to last by partial evaluation, which is
    exactly the work Algorithm-2 style evaluation does per box when nothing
    is shared; the per-box baseline of the amortised engines.
    """
    if len(B) != F.nvars:
        raise ArityMismatch(f"box has {len(B)} coordinates, polynomial has {F.nvars} variables")
    G = F
    for x in B[:-1]:
        if G.is_zero():
            return zero_like(B[-1])
        G = partial_eval(G, x, counter)
    return eval_univariate(G, B[-1], counter)


def differentiate(F: SparsePoly, var: int) -> SparsePoly:
    """Formal partial derivative with respect to variable ``var`` (0-based)."""
    if not 0 <= var < F.nvars:
        raise IndexOutOfRange(f"variable {var} outside 0..{F.nvars - 1}")
    out = []
    for exp, c in F.terms:
        e = exp[var]
        if e:
            out.append((exp[:var] + (e - 1,) + exp[var + 1:], c * e))
    return SparsePoly(F.nvars, out)


def _parse_coef(tok: str):
    try:
        return float(tok)
    except ValueError:
        pass
    try:
        return float(Fraction(tok))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad coefficient {tok!r}") from None


def parse_poly(text: str, source: str | None = None) -> SparsePoly:
    """Parse the monomial-list format: ``coefficient e1 ... ek`` per line.

    ``#`` starts a comment; blank lines are ignored; the arity is fixed by the
    first data line.  Zero coefficients are accepted and dropped.
    """
    arity = None
    seen: dict[Exponent, int] = {}
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) < 2:
            raise PolySyntaxError("expected a coefficient and at least one exponent", lineno, source)
        try:
            coef = _parse_coef(toks[0])
        except ValueError as exc:
            raise PolySyntaxError(str(exc), lineno, source) from None
        try:
            exp = tuple(int(t) for t in toks[1:])
        except ValueError:
            raise PolySyntaxError(f"exponents must be integers: {' '.join(toks[1:])!r}", lineno, source) from None
        if any(e < 0 for e in exp):
            raise PolySyntaxError("exponents must be non-negative", lineno, source)
        if arity is None:
            arity = len(exp)
        elif len(exp) != arity:
            raise ArityMismatch(f"{source or 'line'}:{lineno}: {len(exp)} exponents, expected {arity}")
        if exp in seen:
            raise DuplicateTuple(exp, lineno)
        seen[exp] = lineno
        terms.append((exp, coef))
    if arity is None:
        raise EmptyPolynomial(f"{source or 'input'}: no monomials")
    return SparsePoly(arity, terms)


def read_poly(path) -> SparsePoly:
    with open(path) as fh:
        return parse_poly(fh.read(), source=str(path))
