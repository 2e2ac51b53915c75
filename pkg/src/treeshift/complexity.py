"""The complexity function p(n) = number of allowed height-n blocks.

For a Markov tree-shift, the count vector ``B_n`` (``B_n[i]`` = allowed
height-n blocks rooted at ``i``) obeys ``B_{n+1} = f(B_n)`` with

    f(x)_i = (A_1 x)_i * (A_2 x)_i * ... * (A_k x)_i,

starting from the all-ones vector, so ``p(n) = sum(f^n(1))``.  Exact values
use Python integers; the log-domain path renormalises by the largest
coordinate at every step so that arbitrarily large n stay in float range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import Block, TransitionSystem, node_count

__all__ = [
    "DEFAULT_EXACT_LIMIT",
    "DEFAULT_ORACLE_BUDGET",
    "ExactLimitError",
    "OracleBudgetError",
    "DegenerateSystemError",
    "CountVector",
    "ProjectiveState",
    "ComplexityValue",
    "step_counts",
    "count_vector",
    "complexity_exact",
    "initial_state",
    "projective_step",
    "complexity_log",
    "log_complexities",
    "complexity_value",
    "oracle_count_blocks",
    "enumerate_blocks",
]

DEFAULT_EXACT_LIMIT = 12
DEFAULT_ORACLE_BUDGET = 2**25

CountVector = tuple[int, ...]


class ExactLimitError(ValueError):
    pass


class OracleBudgetError(ValueError):
    pass


class DegenerateSystemError(ArithmeticError):
    """The iteration collapsed to the zero vector (non-admissible system)."""


def step_counts(v: Sequence[int], sys: TransitionSystem) -> CountVector:
    if len(v) != sys.d:
        raise ValueError(f"count vector has length {len(v)}, expected {sys.d}")
    out = []
    for i in range(sys.d):
        prod = 1
        for M in sys.matrices:
            prod *= sum(v[j] for j, a in enumerate(M[i]) if a)
        out.append(prod)
    return tuple(out)


def count_vector(sys: TransitionSystem, n: int) -> CountVector:
    """``f^n(1)``: allowed height-n blocks per root symbol."""
    v: CountVector = (1,) * sys.d
    for _ in range(n):
        v = step_counts(v, sys)
    return v


def complexity_exact(sys: TransitionSystem, n: int, exact_limit: int = DEFAULT_EXACT_LIMIT) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > exact_limit:
        raise ExactLimitError(
            f"n={n} exceeds the exact limit {exact_limit}; use the log path "
            "(complexity_log, or --log on the command line) or raise the limit with --exact-limit"
        )
    return sum(count_vector(sys, n))


@dataclass(frozen=True)
class ProjectiveState:
    """Max-normalised direction of ``f^n(1)`` plus its accumulated scale.

    ``f^n(1) = exp(log_scale) * eta`` with ``log_scale = k^n * scaled_sum``;
    ``scaled_sum`` collects ``log M_j / k^(j+1)`` so it stays O(1) in n.
    """

    eta: tuple[float, ...]
    step: int
    scaled_sum: float
    k: int

    @property
    def log_scale(self) -> float:
        return float(self.k) ** self.step * self.scaled_sum

    def log_norm(self) -> float:
        """``log ||f^n(1)||`` (sum norm)."""
        return self.log_scale + math.log(math.fsum(self.eta))


def initial_state(sys: TransitionSystem) -> ProjectiveState:
    return ProjectiveState((1.0,) * sys.d, 0, 0.0, sys.k)


def projective_step(s: ProjectiveState, sys: TransitionSystem) -> ProjectiveState:
    w = []
    for i in range(sys.d):
        prod = 1.0
        for M in sys.matrices:
            prod *= math.fsum(e for e, a in zip(s.eta, M[i]) if a)
        w.append(prod)
    top = max(w)
    if top == 0.0:
        raise DegenerateSystemError(
            f"{sys.label()}: no allowed blocks of height {s.step + 1} (zero rows in the transition matrices)"
        )
    eta = tuple(x / top for x in w)
    scaled = s.scaled_sum + math.log(top) / float(sys.k) ** (s.step + 1)
    return ProjectiveState(eta, s.step + 1, scaled, sys.k)


def log_complexities(sys: TransitionSystem, n_max: int) -> Iterator[tuple[int, float, ProjectiveState]]:
    """Yield ``(n, log p(n), state)`` for n = 0..n_max."""
    s = initial_state(sys)
    yield 0, math.log(sys.d), s
    for _ in range(n_max):
        s = projective_step(s, sys)
        yield s.step, s.log_norm(), s


def complexity_log(sys: TransitionSystem, n: int) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return math.log(sys.d)
    s = initial_state(sys)
    for _ in range(n):
        s = projective_step(s, sys)
    return s.log_norm()


@dataclass(frozen=True)
class ComplexityValue:
    n: int
    exact: int | None
    log_value: float

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "exact": None if self.exact is None else str(self.exact),
            "log_value": self.log_value,
        }


def complexity_value(
    sys: TransitionSystem, n: int, exact: bool = True, exact_limit: int = DEFAULT_EXACT_LIMIT
) -> ComplexityValue:
    if exact:
        p = complexity_exact(sys, n, exact_limit)
        return ComplexityValue(n, p, math.log(p) if p > 0 else -math.inf)
    return ComplexityValue(n, None, complexity_log(sys, n))


# --- brute-force oracle -------------------------------------------------------
# Deliberately independent of step_counts: every labelling of the height-n
# block is generated and every parent/child edge is checked against the matrices.

_CHUNK = 1 << 16


def _check_budget(sys: TransitionSystem, n: int, budget: int) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    nodes = node_count(sys.k, n)
    total = sys.d**nodes
    if total > budget:
        raise OracleBudgetError(
            f"height-{n} blocks have {nodes} nodes, i.e. {sys.d}^{nodes} labellings; "
            f"the oracle budget is {budget} candidate labellings"
        )
    return nodes


def _allowed_chunks(sys: TransitionSystem, n: int, budget: int) -> Iterator[np.ndarray]:
    nodes = _check_budget(sys, n, budget)
    d, k = sys.d, sys.k
    inner = node_count(k, n - 1) if n > 0 else 0
    mats = [np.asarray(M, dtype=bool) for M in sys.matrices]
    powers = d ** np.arange(nodes - 1, -1, -1, dtype=np.int64)
    total = d**nodes
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        labels = (idx[:, None] // powers[None, :]) % d
        ok = np.ones(len(idx), dtype=bool)
        for p in range(inner):
            parent = labels[:, p]
            for m, M in enumerate(mats):
                ok &= M[parent, labels[:, k * p + 1 + m]]
        yield labels[ok]


def oracle_count_blocks(sys: TransitionSystem, n: int, budget: int = DEFAULT_ORACLE_BUDGET) -> int:
    return sum(len(chunk) for chunk in _allowed_chunks(sys, n, budget))


def enumerate_blocks(
    sys: TransitionSystem, n: int, cap: int | None = None, budget: int = DEFAULT_ORACLE_BUDGET
) -> list[Block]:
    """Allowed height-n blocks in lexicographic label order, at most ``cap`` of them."""
    out: list[Block] = []
    for chunk in _allowed_chunks(sys, n, budget):
        for row in chunk:
            if cap is not None and len(out) >= cap:
                return out
            out.append(Block(sys.k, sys.d, n, tuple(int(v) for v in row)))
    return out
