"""Irreducibility, mixing and chaos for Markov tree-shifts.

Tree-shift irreducibility and mixing reduce to a question about products
``A_x = A_{x_1} ... A_{x_n}`` along the words of a complete prefix set (CPS):

* mixing: some CPS has every ``A_x`` entrywise positive;
* irreducible: for each pair ``(i, j)`` some CPS has ``A_x(i, j) > 0``.

Only the positivity pattern of ``A_x`` matters, so the search runs over the
finite semigroup of boolean matrices generated by the patterns of the
``A_m``.  Deciding whether a CPS exists is a two-player reachability game on
that semigroup (the prover picks "stop here", the refuter picks the next
direction); its winning region is a least fixpoint, and a winning strategy
read off the fixpoint is the certificate.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence, Union

from .core import Matrix, TransitionSystem, Word

__all__ = [
    "BooleanMatrix",
    "ALL",
    "Target",
    "PrefixSet",
    "Decision",
    "ChaosStatus",
    "ChaosVerdict",
    "to_boolean",
    "boolean_identity",
    "boolean_product",
    "word_pattern",
    "matrix_irreducible",
    "matrix_primitive",
    "reachable_patterns",
    "decide_mixing",
    "decide_irreducible",
    "verify_cps",
    "classify_chaos",
    "diagonal_only_rows",
]

BooleanMatrix = tuple[tuple[bool, ...], ...]

ALL = "all"
Target = Union[str, tuple[int, int]]


def to_boolean(M: Sequence[Sequence[int]]) -> BooleanMatrix:
    return tuple(tuple(v > 0 for v in row) for row in M)


def boolean_identity(d: int) -> BooleanMatrix:
    return tuple(tuple(i == j for j in range(d)) for i in range(d))


def boolean_product(P: BooleanMatrix, Q: BooleanMatrix) -> BooleanMatrix:
    """Positivity pattern of the product of matrices with patterns P and Q."""
    n = len(P)
    if len(Q) != n or any(len(row) != n for row in P) or any(len(row) != n for row in Q):
        raise ValueError(f"dimension mismatch in boolean product ({len(P)} vs {len(Q)})")
    cols = list(zip(*Q))
    return tuple(tuple(any(a and b for a, b in zip(row, col)) for col in cols) for row in P)


def word_pattern(sys: TransitionSystem, w: Sequence[int]) -> BooleanMatrix:
    """Positivity pattern of ``A_w``; the empty word gives the identity."""
    P = boolean_identity(sys.d)
    for c in w:
        if not 0 <= c < sys.k:
            raise ValueError(f"direction {c} out of range for k={sys.k}")
        P = boolean_product(P, to_boolean(sys.matrices[c]))
    return P


# --- single matrices ----------------------------------------------------------


def _reach(adj: Sequence[Sequence[bool]], start: int) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        i = todo.pop()
        for j, e in enumerate(adj[i]):
            if e and j not in seen:
                seen.add(j)
                todo.append(j)
    return seen


def matrix_irreducible(M: Sequence[Sequence[int]]) -> bool:
    """True iff the digraph ``i -> j`` (for ``M[i][j] > 0``) is strongly connected.

    A 1x1 matrix needs a self-loop, since irreducibility asks for ``M^n(i,i) > 0``
    with ``n >= 1``.
    """
    B = to_boolean(M)
    d = len(B)
    if d == 1:
        return B[0][0]
    if len(_reach(B, 0)) != d:
        return False
    BT = tuple(zip(*B))
    return len(_reach(BT, 0)) == d


def matrix_primitive(M: Sequence[Sequence[int]]) -> bool:
    # Wielandt: a primitive d x d matrix has M^n > 0 for some n <= d^2 - 2d + 2.
    B = to_boolean(M)
    d = len(B)
    P = B
    for _ in range(d * d - 2 * d + 2):
        if all(all(row) for row in P):
            return True
        P = boolean_product(P, B)
    return False


# --- prefix sets --------------------------------------------------------------


@dataclass(frozen=True)
class PrefixSet:
    """A finite set of nonempty words over the directions ``0..k-1``."""

    words: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(sorted(set(tuple(w) for w in self.words))))

    @classmethod
    def of(cls, *words: Iterable[int] | str) -> "PrefixSet":
        """Build from words given as sequences or digit strings, e.g. ``PrefixSet.of("0", "10")``."""
        return cls(tuple(tuple(int(c) for c in w) for w in words))

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    @property
    def length(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def _proper_prefixes(self) -> set[Word]:
        return {w[:i] for w in self.words for i in range(len(w))}

    def is_prefix_free(self) -> bool:
        return not (self._proper_prefixes() & set(self.words))

    def is_complete(self, k: int) -> bool:
        """Every internal node of the word trie has all ``k`` children."""
        if not self.words or any(len(w) == 0 for w in self.words):
            return False
        inner = self._proper_prefixes()
        leaves = set(self.words)
        return all(x + (c,) in leaves or x + (c,) in inner for x in inner for c in range(k))

    def is_cps(self, k: int) -> bool:
        return self.is_prefix_free() and self.is_complete(k)

    def as_strings(self) -> list[str]:
        return ["".join(map(str, w)) for w in self.words]

    def to_json(self, target: Target = ALL) -> dict:
        return {
            "target": ALL if target == ALL else list(target),
            "words": [list(w) for w in self.words],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> tuple["PrefixSet", Target]:
        t = doc.get("target", ALL)
        target: Target = ALL if t == ALL else (int(t[0]), int(t[1]))
        return cls(tuple(tuple(int(c) for c in w) for w in doc["words"])), target


def _meets(P: BooleanMatrix, target: Target) -> bool:
    if target == ALL:
        return all(all(row) for row in P)
    i, j = target
    return P[i][j]


def verify_cps(sys: TransitionSystem, P: PrefixSet, target: Target = ALL) -> bool:
    """Check that ``P`` is a CPS and every ``A_x``, ``x`` in ``P``, meets ``target``.

    Raises ``ValueError`` if a word uses a direction ``>= k``.
    """
    for w in P.words:
        for c in w:
            if not 0 <= c < sys.k:
                raise ValueError(f"word {w} uses direction {c} but k={sys.k}")
    if not P.is_cps(sys.k):
        return False
    return all(_meets(word_pattern(sys, w), target) for w in P.words)


# --- fixpoint decision --------------------------------------------------------


def reachable_patterns(sys: TransitionSystem) -> dict[BooleanMatrix, tuple[BooleanMatrix, ...]]:
    """Patterns reachable from the identity by right multiplication, with successors."""
    gens = [to_boolean(M) for M in sys.matrices]
    start = boolean_identity(sys.d)
    succ: dict[BooleanMatrix, tuple[BooleanMatrix, ...]] = {}
    queue = deque([start])
    while queue:
        P = queue.popleft()
        if P in succ:
            continue
        nxt = tuple(boolean_product(P, G) for G in gens)
        succ[P] = nxt
        queue.extend(Q for Q in nxt if Q not in succ)
    return succ


def _winning_ranks(
    succ: Mapping[BooleanMatrix, Sequence[BooleanMatrix]],
    leaf: Callable[[BooleanMatrix], bool],
) -> dict[BooleanMatrix, int]:
    # Synchronous Kleene iteration: rank = round of entry = least height of a winning subtree.
    rank: dict[BooleanMatrix, int] = {}
    r = 0
    while True:
        new = [P for P in succ if P not in rank and (leaf(P) or all(Q in rank for Q in succ[P]))]
        if not new:
            return rank
        for P in new:
            rank[P] = r
        r += 1


def _extract(
    succ: Mapping[BooleanMatrix, Sequence[BooleanMatrix]],
    leaf: Callable[[BooleanMatrix], bool],
    rank: Mapping[BooleanMatrix, int],
) -> PrefixSet:
    words: list[Word] = []
    root = next(iter(succ))  # the identity is inserted first

    def walk(P: BooleanMatrix, prefix: Word) -> None:
        if leaf(P):
            words.append(prefix)
            return
        for c, Q in enumerate(succ[P]):
            walk(Q, prefix + (c,))

    # the root always expands: the empty word is not allowed in a certificate
    for c, Q in enumerate(succ[root]):
        assert Q in rank
        walk(Q, (c,))
    return PrefixSet(tuple(words))


def _solve(sys: TransitionSystem, succ, target: Target) -> PrefixSet | None:
    leaf = lambda P: _meets(P, target)  # noqa: E731
    rank = _winning_ranks(succ, leaf)
    root = boolean_identity(sys.d)
    if all(Q in rank for Q in succ[root]):
        return _extract(succ, leaf, rank)
    return None


@dataclass(frozen=True)
class Decision:
    """Outcome of a mixing/irreducibility test.

    ``certificate`` is a :class:`PrefixSet` for mixing and a mapping
    ``(i, j) -> PrefixSet`` for irreducibility.  When irreducibility fails,
    ``failing_pair`` names the first pair without a CPS.
    """

    holds: bool
    certificate: PrefixSet | dict[tuple[int, int], PrefixSet] | None
    method: str
    failing_pair: tuple[int, int] | None = None

    def to_json(self, certificates: bool = True) -> dict:
        out: dict = {"holds": self.holds, "method": self.method}
        if self.failing_pair is not None:
            out["failing_pair"] = list(self.failing_pair)
        if certificates and self.certificate is not None:
            if isinstance(self.certificate, PrefixSet):
                out["certificate"] = self.certificate.to_json(ALL)
            else:
                out["certificate"] = [cps.to_json(pair) for pair, cps in sorted(self.certificate.items())]
        return out


def decide_mixing(sys: TransitionSystem) -> Decision:
    succ = reachable_patterns(sys)
    cert = _solve(sys, succ, ALL)
    return Decision(cert is not None, cert, "boolean-semigroup-fixpoint")


def decide_irreducible(sys: TransitionSystem) -> Decision:
    succ = reachable_patterns(sys)
    certs: dict[tuple[int, int], PrefixSet] = {}
    for i in range(sys.d):
        for j in range(sys.d):
            cert = _solve(sys, succ, (i, j))
            if cert is None:
                return Decision(False, None, "boolean-semigroup-fixpoint-per-pair", failing_pair=(i, j))
            certs[(i, j)] = cert
    return Decision(True, certs, "boolean-semigroup-fixpoint-per-pair")


# --- chaos --------------------------------------------------------------------


class ChaosStatus(str, Enum):
    CHAOTIC = "Chaotic"
    NOT_CHAOTIC = "NotChaotic"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ChaosVerdict:
    status: ChaosStatus
    evidence: str

    @property
    def chaotic(self) -> bool | None:
        if self.status is ChaosStatus.UNKNOWN:
            return None
        return self.status is ChaosStatus.CHAOTIC

    def to_json(self) -> dict:
        return {"status": self.status.value, "evidence": self.evidence}


def diagonal_only_rows(M: Matrix) -> list[int]:
    """Rows whose single nonzero entry sits on the diagonal."""
    return [i for i, row in enumerate(M) if row[i] and sum(1 for v in row if v) == 1]


def classify_chaos(sys: TransitionSystem) -> ChaosVerdict:
    """Devaney chaos from the available sufficient conditions.

    Irreducible finite-type and mixing tree-shifts are chaotic.  A matrix
    with a row allowing only the diagonal transition rules out dense
    periodic points.  Anything else is reported as unknown.
    """
    if decide_irreducible(sys).holds:
        return ChaosVerdict(ChaosStatus.CHAOTIC, "irreducible-sft")
    if decide_mixing(sys).holds:
        return ChaosVerdict(ChaosStatus.CHAOTIC, "mixing")
    if any(diagonal_only_rows(M) for M in sys.matrices):
        return ChaosVerdict(ChaosStatus.NOT_CHAOTIC, "diagonal-only-row")
    return ChaosVerdict(ChaosStatus.UNKNOWN, "none")
