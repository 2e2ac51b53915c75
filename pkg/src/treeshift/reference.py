"""Reference classification and entropy values for the binary systems X_1 ... X_28."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = ["IRREDUCIBLE", "MIXING", "CHAOTIC", "EntropyReference", "ENTROPY_REFERENCES", "reference_for"]

IRREDUCIBLE = frozenset({1, 3, 4, 6, 14, 15, 17, 19, 21, 26})
MIXING = frozenset({1, 4, 6, 19, 26})
CHAOTIC = IRREDUCIBLE

LOG2 = math.log(2)


@dataclass(frozen=True)
class EntropyReference:
    """A point value with tolerance, or an interval with open/closed ends."""

    group: str  # the group of systems sharing this value, e.g. "X_5,X_7"
    kind: str  # "point" | "interval"
    value: float | None = None
    tol: float = 0.0
    lo: float | None = None
    hi: float | None = None
    lo_open: bool = False
    hi_open: bool = False

    def check(self, h: float) -> bool:
        if self.kind == "point":
            if self.tol == 0.0:
                return h == self.value
            return abs(h - self.value) <= self.tol
        lo_ok = h > self.lo if self.lo_open else h >= self.lo
        hi_ok = h < self.hi if self.hi_open else h <= self.hi
        return lo_ok and hi_ok

    def describe(self) -> str:
        if self.kind == "point":
            if self.tol == 0.0:
                return f"{self.value!r} exactly"
            return f"{self.value:.9g} +/- {self.tol:g}"
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo}, {self.hi}{right}"

    def to_json(self) -> dict:
        out: dict = {"group": self.group, "kind": self.kind}
        if self.kind == "point":
            out.update(value=self.value, tol=self.tol)
        else:
            out.update(lo=self.lo, hi=self.hi, lo_open=self.lo_open, hi_open=self.hi_open)
        return out


def _point(value, tol):
    return EntropyReference("", "point", value=value, tol=tol)


def _interval(lo, hi, lo_open=False, hi_open=False):
    return EntropyReference("", "interval", lo=lo, hi=hi, lo_open=lo_open, hi_open=hi_open)


_GROUPS: list[tuple[tuple[int, ...], EntropyReference]] = [
    ((1,), _point(LOG2, 1e-9)),
    ((2, 3), _point(LOG2 / 2, 1e-9)),
    ((4, 6), _interval(0.47616, 0.58448)),
    ((5, 7), _point(0.507836, 1e-4)),
    ((8, 9, 14), _point(0.0, 0.0)),
    ((10, 12), _point(0.253918, 1e-4)),
    ((11, 13), _point(0.234348, 1e-4)),
    ((15, 17), _interval(0.173286, 0.243239, lo_open=True)),
    ((16, 18), _interval(0.11903, 0.14613)),
    ((19, 26), _point(0.509, 1e-3)),
    ((23, 28), _point(0.407354, 1e-4)),
    ((20, 21, 25, 27), _point(LOG2 / 2, 1e-9)),
    ((22, 24), _interval(0.2539, 0.427934, lo_open=True)),
]

# each group shares one reference; its label lists the systems in it
ENTROPY_REFERENCES: dict[int, EntropyReference] = {
    r: replace(ref, group=",".join(f"X_{x}" for x in rs)) for rs, ref in _GROUPS for r in rs
}


def reference_for(r: int) -> EntropyReference:
    return ENTROPY_REFERENCES[r]
