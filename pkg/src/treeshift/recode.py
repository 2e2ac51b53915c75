"""Higher-block recoding of finite-type tree-shifts.

A tree-shift given by forbidden height-s blocks is conjugate to a Markov
tree-shift whose symbols are its allowed height-s blocks.  A direction-m
transition ``u -> v`` is allowed when the top height-(s-1) part of ``v``
equals the height-(s-1) sub-block of ``u`` hanging from its m-th child.

Counts here are of locally admissible blocks (no forbidden pattern rooted
at any node deep enough to hold one).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .complexity import DEFAULT_ORACLE_BUDGET, OracleBudgetError, complexity_exact
from .core import (
    Block,
    SystemError_,
    TransitionSystem,
    node_count,
    system_to_json,
    validate_system,
    word_index,
    words_up_to,
)

__all__ = [
    "EmptyShiftError",
    "ForbiddenSet",
    "SymbolTable",
    "forbidden_set_from_system",
    "enumerate_allowed_s_blocks",
    "higher_block_presentation",
    "count_allowed_blocks",
    "oracle_count_allowed",
    "verify_recoding",
    "overlap_consistent",
    "recoding_to_json",
]


class EmptyShiftError(ValueError):
    pass


@dataclass(frozen=True)
class ForbiddenSet:
    k: int
    d: int
    s: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        if self.d < 2:
            raise SystemError_("alphabet size d must be >= 2")
        if self.k < 1:
            raise SystemError_("k must be >= 1")
        if self.s < 1:
            raise SystemError_("forbidden blocks must have height s >= 1")
        for b in self.blocks:
            if b.height != self.s or b.k != self.k or b.d != self.d:
                raise SystemError_(
                    f"forbidden block {list(b.labels)} does not match (k={self.k}, d={self.d}, s={self.s})"
                )
        object.__setattr__(self, "blocks", tuple(sorted(set(self.blocks), key=lambda b: b.labels)))

    @property
    def labels(self) -> frozenset[tuple[int, ...]]:
        return frozenset(b.labels for b in self.blocks)

    @classmethod
    def from_labels(cls, k: int, d: int, s: int, blocks: Sequence[Sequence[int]]) -> "ForbiddenSet":
        return cls(k, d, s, tuple(Block(k, d, s, tuple(int(v) for v in lab)) for lab in blocks))

    @classmethod
    def from_json(cls, doc: Mapping) -> "ForbiddenSet":
        try:
            return cls.from_labels(int(doc["k"]), int(doc["d"]), int(doc["s"]), doc["blocks"])
        except KeyError as exc:
            raise SystemError_(f"forbidden-set document is missing {exc}") from None

    def to_json(self) -> dict:
        return {"k": self.k, "d": self.d, "s": self.s, "blocks": [list(b.labels) for b in self.blocks]}


@dataclass(frozen=True)
class SymbolTable:
    symbols: tuple[Block, ...]

    @property
    def index(self) -> dict[Block, int]:
        return {b: i for i, b in enumerate(self.symbols)}

    def __len__(self):
        return len(self.symbols)


def forbidden_set_from_system(sys: TransitionSystem) -> ForbiddenSet:
    """Express a Markov system as forbidden height-1 blocks."""
    bad = []
    for children in itertools.product(range(sys.d), repeat=sys.k):
        for a in range(sys.d):
            if any(not sys.matrices[m][a][c] for m, c in enumerate(children)):
                bad.append((a,) + children)
    return ForbiddenSet.from_labels(sys.k, sys.d, 1, bad)


def _check_budget(f: ForbiddenSet, height: int, budget: int) -> int:
    nodes = node_count(f.k, height)
    if f.d**nodes > budget:
        raise OracleBudgetError(
            f"height-{height} blocks have {f.d}^{nodes} labellings, over the budget of {budget}"
        )
    return nodes


def enumerate_allowed_s_blocks(f: ForbiddenSet, budget: int = DEFAULT_ORACLE_BUDGET) -> SymbolTable:
    nodes = _check_budget(f, f.s, budget)
    bad = f.labels
    return SymbolTable(
        tuple(
            Block(f.k, f.d, f.s, lab)
            for lab in itertools.product(range(f.d), repeat=nodes)
            if lab not in bad
        )
    )


def _child_subblock_labels(b: Block, m: int, height: int) -> tuple[int, ...]:
    return b.subblock((m,), height).labels


def higher_block_presentation(
    f: ForbiddenSet, budget: int = DEFAULT_ORACLE_BUDGET
) -> tuple[TransitionSystem, SymbolTable]:
    table = enumerate_allowed_s_blocks(f, budget)
    if not table.symbols:
        raise EmptyShiftError("empty tree-shift: every height-s block is forbidden")
    h = f.s - 1
    by_top: dict[tuple[int, ...], list[int]] = {}
    for v, sym in enumerate(table.symbols):
        by_top.setdefault(sym.top(h).labels, []).append(v)
    n = len(table)
    mats = []
    for m in range(f.k):
        M = [[0] * n for _ in range(n)]
        for u, sym in enumerate(table.symbols):
            for v in by_top.get(_child_subblock_labels(sym, m, h), ()):
                M[u][v] = 1
        mats.append(M)
    sys, _ = validate_system(mats, name=f"recoded(k={f.k}, d={f.d}, s={f.s})")
    return sys, table


def overlap_consistent(u: Block, v: Block, m: int) -> bool:
    """Whether ``v`` may sit at the m-th child of ``u`` (node-by-node overlap check)."""
    s = u.height
    return all(
        u.labels[word_index(u.k, (m,) + w)] == v.labels[word_index(v.k, w)] for w in words_up_to(u.k, s - 1)
    )


def count_allowed_blocks(f: ForbiddenSet, height: int) -> int:
    """Locally admissible height-``height`` blocks of X_F.

    Works top-down: the root's height-s block is enumerated level by level
    and checked against ``F`` directly; each child subtree is then counted
    recursively given the height-(s-1) part it inherits.  Does not look at
    any recoded matrices.
    """
    k, d, s = f.k, f.d, f.s
    if height < s:
        return d ** node_count(k, height)
    bad = f.labels
    top_nodes = node_count(k, s - 1)
    last_level = k**s
    top_words = list(words_up_to(k, s - 1))

    @lru_cache(maxsize=None)
    def extensions(top: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], ...], ...]:
        # allowed height-s blocks with this top, as the k child sub-blocks they induce
        out = []
        for tail in itertools.product(range(d), repeat=last_level):
            lab = top + tail
            if lab in bad:
                continue
            out.append(tuple(tuple(lab[word_index(k, (m,) + w)] for w in top_words) for m in range(k)))
        return tuple(out)

    @lru_cache(maxsize=None)
    def count(top: tuple[int, ...], h: int) -> int:
        if h == s - 1:
            return 1
        total = 0
        for children in extensions(top):
            prod = 1
            for child in children:
                prod *= count(child, h - 1)
                if not prod:
                    break
            total += prod
        return total

    return sum(count(top, height) for top in itertools.product(range(d), repeat=top_nodes))


def oracle_count_allowed(f: ForbiddenSet, height: int, budget: int = DEFAULT_ORACLE_BUDGET) -> int:
    """Brute force: every labelling of the block, every node checked against F."""
    nodes = _check_budget(f, height, budget)
    bad = f.labels
    roots = [w for w in words_up_to(f.k, height - f.s)] if height >= f.s else []
    sub_words = list(words_up_to(f.k, f.s))
    offsets = [[word_index(f.k, tuple(r) + w) for w in sub_words] for r in roots]
    return sum(
        1
        for lab in itertools.product(range(f.d), repeat=nodes)
        if all(tuple(lab[i] for i in idx) not in bad for idx in offsets)
    )


def verify_recoding(original: ForbiddenSet, recoded: TransitionSystem, n_check: int = 3) -> bool:
    """Check ``p_X(n + s) == p_Y(n)`` for ``1 <= n <= n_check``."""
    for n in range(1, n_check + 1):
        if count_allowed_blocks(original, n + original.s) != complexity_exact(recoded, n, exact_limit=max(n, 12)):
            return False
    return True


def recoding_to_json(sys: TransitionSystem, table: SymbolTable) -> dict:
    out = system_to_json(sys)
    out["symbols"] = [list(b.labels) for b in table.symbols]
    return out
