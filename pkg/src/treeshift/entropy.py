"""Tree-shift entropies h_PS and h_BC, bounds and reference series.

Natural logarithms throughout.

    h_PS = lim log p(n) / (1 + k + ... + k^n)
    h_BC = lim log log p(n) / n
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .complexity import log_complexities
from .core import TransitionSystem, node_count, validate_system

__all__ = [
    "DEFAULT_N_MAX",
    "DEFAULT_TOL",
    "EntropyEstimate",
    "BoundsReport",
    "SeriesKind",
    "operator_norm_rowmax",
    "bounds_report",
    "h_ps_estimate",
    "h_bc_estimate",
    "bc_raw_ratio",
    "dominates",
    "dominates_up_to_symmetry",
    "conjugacy_scaled_entropy",
    "series_reference",
    "growth_constant",
    "entropy_report",
]

DEFAULT_N_MAX = 40
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    n_used: int
    last_delta: float
    converged: bool
    method: str
    diagnostics: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class BoundsReport:
    ps_upper_norm: float
    ps_upper_trivial: float
    ps_upper: float
    bc_upper: float
    zero_by_row_sums: bool

    def to_json(self) -> dict:
        return {
            "ps_upper_norm": self.ps_upper_norm,
            "ps_upper_trivial": self.ps_upper_trivial,
            "ps_upper": self.ps_upper,
            "bc_upper": self.bc_upper,
            "zero_by_row_sums": self.zero_by_row_sums,
        }


def operator_norm_rowmax(M: Sequence[Sequence[float]]) -> float:
    """Operator norm induced by the max-norm; for M >= 0 this is the largest row sum."""
    return float(max(sum(row) for row in M))


def bounds_report(sys: TransitionSystem) -> BoundsReport:
    norms = [operator_norm_rowmax(M) for M in sys.matrices]
    if min(norms) > 0:
        norm_bound = math.fsum([math.log(sys.d)] + [math.log(v) for v in norms]) / sys.k
    else:
        # an all-zero matrix: the shift is empty beyond height 0
        norm_bound = 0.0
    norm_bound = max(norm_bound, 0.0)
    trivial = math.log(sys.d)
    return BoundsReport(
        ps_upper_norm=norm_bound,
        ps_upper_trivial=trivial,
        ps_upper=min(norm_bound, trivial),
        bc_upper=math.log(sys.k),
        zero_by_row_sums=all(v == 1.0 for v in norms),
    )


def h_ps_estimate(sys: TransitionSystem, n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL) -> EntropyEstimate:
    """Iterate ``h_n = log p(n) / (1 + k + ... + k^n)`` until successive values agree to ``tol``.

    At least two steps are taken before the stopping test applies.  Systems
    whose matrices all have row sums at most one have ``p(n) = d`` and are
    answered exactly.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    if bounds_report(sys).zero_by_row_sums:
        return EntropyEstimate(0.0, 0, 0.0, True, "exact-shortcut-zero")

    h_prev = math.nan
    h = math.nan
    delta = math.inf
    n = 0
    for n, logp, _ in log_complexities(sys, n_max):
        h = logp / node_count(sys.k, n)
        if n >= 1:
            delta = abs(h - h_prev)
        if n >= 2 and delta < tol:
            break
        h_prev = h
    return EntropyEstimate(max(h, 0.0), n, delta, delta <= tol, "projective-iteration")


def bc_raw_ratio(sys: TransitionSystem, n: int) -> float:
    """``log log p(n) / n`` from the log-domain complexity."""
    logp = None
    for _, logp, _ in log_complexities(sys, n):
        pass
    if logp is None or logp <= 0.0:
        raise ValueError(f"{sys.label()}: p({n}) <= 1, so log log p(n) is undefined")
    return math.log(logp) / n


def h_bc_estimate(
    sys: TransitionSystem,
    n_max: int = DEFAULT_N_MAX,
    tol: float = DEFAULT_TOL,
    h_ps: EntropyEstimate | None = None,
) -> EntropyEstimate:
    """The doubly logarithmic entropy h_BC.

    Positive h_PS forces h_BC = log k, so that value is returned directly
    (the raw ratio converges only like 1/n); the raw ratio at ``n_max`` is
    kept in ``diagnostics``.
    """
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    if bounds_report(sys).zero_by_row_sums:
        return EntropyEstimate(0.0, 0, 0.0, True, "exact-shortcut-zero")
    if h_ps is None:
        h_ps = h_ps_estimate(sys, n_max, tol)
    raw = bc_raw_ratio(sys, n_max)
    prev = bc_raw_ratio(sys, n_max - 1)
    diag = {"raw_ratio": raw, "raw_delta": abs(raw - prev), "h_ps": h_ps.value}
    if h_ps.value > 10 * tol:
        # exact whenever h_PS > 0, hence zero residual
        return EntropyEstimate(math.log(sys.k), n_max, 0.0, True, "shortcut-log-k", diag)
    delta = abs(raw - prev)
    return EntropyEstimate(max(raw, 0.0), n_max, delta, delta <= tol, "projective-iteration", diag)


def _check_same_shape(X: TransitionSystem, Y: TransitionSystem) -> None:
    if X.k != Y.k or X.d != Y.d:
        raise ValueError(f"shape mismatch: (k={X.k}, d={X.d}) vs (k={Y.k}, d={Y.d})")


def dominates(X: TransitionSystem, Y: TransitionSystem) -> bool:
    """Entrywise ``A_m >= B_m`` for every direction m."""
    _check_same_shape(X, Y)
    return all(
        a >= b
        for MX, MY in zip(X.matrices, Y.matrices)
        for rx, ry in zip(MX, MY)
        for a, b in zip(rx, ry)
    )


def dominates_up_to_symmetry(X: TransitionSystem, Y: TransitionSystem) -> bool:
    """Whether X dominates some direction-reordered, alphabet-relabelled copy of Y.

    Both operations leave p(n) unchanged, so this still orders the entropies.
    """
    _check_same_shape(X, Y)
    for perm in itertools.permutations(range(Y.d)):
        relabelled = [tuple(tuple(M[perm[i]][perm[j]] for j in range(Y.d)) for i in range(Y.d)) for M in Y.matrices]
        for order in itertools.permutations(relabelled):
            if dominates(X, validate_system(list(order))[0]):
                return True
    return False


def conjugacy_scaled_entropy(h: float, k: int, s: int) -> float:
    """h_PS of the height-s recoding of a shift with h_PS = h."""
    if h < 0 or s < 0:
        raise ValueError("need h >= 0 and s >= 0")
    return k**s * h


class SeriesKind(str, Enum):
    FIB = "fib"
    LOG_N = "logn"


def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def series_reference(kind: SeriesKind | str, terms: int) -> float:
    """Partial sums ``sum_{n=2}^{terms} 2^-n log Fib(n+1)`` or ``... log n``."""
    kind = SeriesKind(kind)
    if terms < 2:
        raise ValueError("terms must be >= 2")
    if kind is SeriesKind.FIB:
        return math.fsum(math.log(_fib(n + 1)) / 2**n for n in range(2, terms + 1))
    return math.fsum(math.log(n) / 2**n for n in range(2, terms + 1))


def growth_constant(sys: TransitionSystem, n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL) -> float:
    """``exp(h_PS)``: the base c in ``p(n) ~ c^(1 + k + ... + k^n)``.

    For X_5 this is gamma^2, for X_11 sqrt(theta), for X_28 sqrt(l).
    """
    return math.exp(h_ps_estimate(sys, n_max, tol).value)


def entropy_report(sys: TransitionSystem, n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL) -> dict:
    ps = h_ps_estimate(sys, n_max, tol)
    bc = h_bc_estimate(sys, max(n_max, 3), tol, h_ps=ps)
    out = {
        "h_ps": ps.value,
        "h_bc": bc.value,
        "n_used": ps.n_used,
        "converged": ps.converged,
        "bounds": bounds_report(sys).to_json(),
        "method": ps.method,
        "h_bc_method": bc.method,
        "growth_constant": math.exp(ps.value),
    }
    if "raw_ratio" in bc.diagnostics:
        out["h_bc_raw_ratio"] = bc.diagnostics["raw_ratio"]
    return out
