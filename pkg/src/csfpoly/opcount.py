"""Scalar operation accounting for the evaluation engines."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class OpCounter:
    """Ring operations performed by an evaluation.

    An interval (or complex) add or mul counts as one operation.  ``pows``
    holds the multiplications that integer powers expand to (e - 1 for
    x**e), so ``total`` is a plain add+mul count.
    """

    adds: int = 0
    muls: int = 0
    pows: int = 0

    def add(self, adds: int = 0, muls: int = 0, pows: int = 0, times: int = 1) -> None:
        self.adds += adds * times
        self.muls += muls * times
        self.pows += pows * times

    def merge(self, other: "OpCounter") -> None:
        self.add(other.adds, other.muls, other.pows)

    def reset(self) -> None:
        self.adds = self.muls = self.pows = 0

    @property
    def total(self) -> int:
        return self.adds + self.muls + self.pows

    def copy(self) -> "OpCounter":
        return OpCounter(self.adds, self.muls, self.pows)


def op_count_report(counter: OpCounter | None) -> dict:
    if counter is None:
        return {"adds": 0, "muls": 0, "pows": 0, "total": 0}
    return {"adds": counter.adds, "muls": counter.muls, "pows": counter.pows, "total": counter.total}
