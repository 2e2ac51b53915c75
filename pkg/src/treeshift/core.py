"""Transition systems, words and blocks for Markov tree-shifts.

A Markov tree-shift on k-trees over the alphabet {0, ..., d-1} is given by k
square 0/1 matrices, one per direction.  ``matrices[m][i][j] == 1`` means that
a node labelled ``i`` may have a direction-``m`` child labelled ``j``.

Directions are 0-based; direction 0 is the first (leftmost) child.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

__all__ = [
    "Matrix",
    "Word",
    "SystemError_",
    "TransitionSystem",
    "Block",
    "ValidationReport",
    "validate_system",
    "CATALOG_MATRICES",
    "CATALOG_PAIRS",
    "canonical_binary_catalog",
    "catalog_system",
    "node_count",
    "word_index",
    "block_node_label",
    "words_up_to",
    "system_from_json",
    "system_to_json",
    "load_system",
    "load_json_file",
    "block_from_json",
    "block_to_json",
]

Matrix = tuple[tuple[int, ...], ...]
Word = tuple[int, ...]


class SystemError_(ValueError):
    """Raised for malformed transition systems or blocks."""


@dataclass(frozen=True)
class ValidationReport:
    admissible: bool
    zero_rows: tuple[tuple[int, int], ...] = ()
    zero_cols: tuple[tuple[int, int], ...] = ()
    messages: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "admissible": self.admissible,
            "zero_rows": [list(p) for p in self.zero_rows],
            "zero_cols": [list(p) for p in self.zero_cols],
            "messages": list(self.messages),
        }


@dataclass(frozen=True)
class TransitionSystem:
    """The tree-shift ``(A_1, ..., A_k)``; immutable once built.

    Construct through :func:`validate_system` to get shape checking and an
    admissibility report.
    """

    matrices: tuple[Matrix, ...]
    name: str | None = None
    report: ValidationReport = field(default=None, compare=False, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        if self.report is None:
            _, report = validate_system(self.matrices)
            object.__setattr__(self, "report", report)

    @property
    def k(self) -> int:
        return len(self.matrices)

    @property
    def d(self) -> int:
        return len(self.matrices[0])

    @property
    def admissible(self) -> bool:
        return self.report.admissible

    def label(self) -> str:
        return self.name if self.name is not None else "<unnamed>"


def _as_matrix(raw) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in raw)


def validate_system(
    raw: Sequence[Sequence[Sequence[int]]] | TransitionSystem,
    name: str | None = None,
) -> tuple[TransitionSystem, ValidationReport]:
    """Check shapes and entries of ``raw`` and flag zero rows/columns.

    Structural problems (non-square, mismatched sizes, entries outside {0, 1})
    raise :class:`SystemError_`.  Zero rows or columns are only reported: the
    returned system is still usable.
    """
    if isinstance(raw, TransitionSystem):
        name = raw.name if name is None else name
        raw = raw.matrices
    if len(raw) == 0:
        raise SystemError_("a transition system needs at least one matrix")
    mats: list[Matrix] = []
    size = None
    for m, mat in enumerate(raw):
        rows = list(mat)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise SystemError_(f"matrix {m} is not square")
        if size is None:
            size = n
        elif n != size:
            raise SystemError_(f"mismatched dimensions: matrix 0 is {size}x{size}, matrix {m} is {n}x{n}")
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                if isinstance(v, bool) or v not in (0, 1):
                    raise SystemError_(f"matrix {m} entry ({i},{j}) = {v!r} is not 0 or 1")
        mats.append(_as_matrix(rows))

    zero_rows = []
    zero_cols = []
    for m, mat in enumerate(mats):
        for i in range(size):
            if not any(mat[i]):
                zero_rows.append((m, i))
            if not any(mat[r][i] for r in range(size)):
                zero_cols.append((m, i))
    messages = [f"matrix {m} has a zero row {i}" for m, i in zero_rows]
    messages += [f"matrix {m} has a zero column {j}" for m, j in zero_cols]
    report = ValidationReport(
        admissible=not zero_rows and not zero_cols,
        zero_rows=tuple(zero_rows),
        zero_cols=tuple(zero_cols),
        messages=tuple(messages),
    )
    return TransitionSystem(tuple(mats), name=name, report=report), report


# The seven binary matrices used for the 28 binary systems.
CATALOG_MATRICES: dict[str, Matrix] = {
    "A": ((1, 1), (1, 1)),
    "B": ((1, 0), (0, 1)),
    "C": ((0, 1), (1, 0)),
    "D": ((1, 1), (1, 0)),
    "E": ((1, 0), (1, 1)),
    "F": ((0, 1), (1, 1)),
    "G": ((1, 1), (0, 1)),
}

# X_1 ... X_28: unordered pairs of A..G in lexicographic order.
CATALOG_PAIRS: tuple[tuple[str, str], ...] = tuple(
    (a, b) for i, a in enumerate("ABCDEFG") for b in "ABCDEFG"[i:]
)


def canonical_binary_catalog() -> list[TransitionSystem]:
    return [
        validate_system([CATALOG_MATRICES[a], CATALOG_MATRICES[b]], name=f"X_{r}")[0]
        for r, (a, b) in enumerate(CATALOG_PAIRS, start=1)
    ]


def catalog_system(r: int | str) -> TransitionSystem:
    """Return ``X_r`` from the binary catalog; accepts ``4`` or ``"X_4"``."""
    if isinstance(r, str):
        s = r.strip()
        if s.upper().startswith("X_"):
            s = s[2:]
        elif s.upper().startswith("X"):
            s = s[1:]
        try:
            r = int(s)
        except ValueError:
            raise KeyError(f"not a catalog name: {r!r}") from None
    if not 1 <= r <= len(CATALOG_PAIRS):
        raise KeyError(f"catalog index {r} outside 1..{len(CATALOG_PAIRS)}")
    a, b = CATALOG_PAIRS[r - 1]
    return validate_system([CATALOG_MATRICES[a], CATALOG_MATRICES[b]], name=f"X_{r}")[0]


def node_count(k: int, n: int) -> int:
    """Number of nodes in a complete k-ary tree of height n, i.e. 1 + k + ... + k^n."""
    if k == 1:
        return n + 1
    return (k ** (n + 1) - 1) // (k - 1)


def word_index(k: int, w: Sequence[int]) -> int:
    """Breadth-first position of node ``w``; siblings are in direction order."""
    idx = 0
    for c in w:
        if not 0 <= c < k:
            raise SystemError_(f"direction {c} out of range for k={k}")
        idx = idx * k + c + 1
    return idx


def words_up_to(k: int, n: int) -> Iterator[Word]:
    """All words of length <= n, in breadth-first layout order."""
    level: list[Word] = [()]
    for _ in range(n + 1):
        yield from level
        level = [w + (c,) for w in level for c in range(k)]


@dataclass(frozen=True)
class Block:
    """A labelling of the height-``height`` block, stored breadth-first."""

    k: int
    d: int
    height: int
    labels: tuple[int, ...]

    def __post_init__(self):
        if self.height < 0:
            raise SystemError_("block height must be >= 0")
        expected = node_count(self.k, self.height)
        if len(self.labels) != expected:
            raise SystemError_(
                f"block of height {self.height} with k={self.k} needs {expected} labels, got {len(self.labels)}"
            )
        if any(not 0 <= v < self.d for v in self.labels):
            raise SystemError_(f"block label outside 0..{self.d - 1}")

    @property
    def root(self) -> int:
        return self.labels[0]

    def subblock(self, w: Sequence[int], height: int) -> "Block":
        """The height-``height`` block rooted at node ``w``."""
        if len(w) + height > self.height:
            raise SystemError_("sub-block does not fit inside this block")
        labels = tuple(block_node_label(self, tuple(w) + v) for v in words_up_to(self.k, height))
        return Block(self.k, self.d, height, labels)

    def top(self, height: int) -> "Block":
        return self.subblock((), height)


def block_node_label(b: Block, w: Sequence[int]) -> int:
    if len(w) > b.height:
        raise IndexError(f"word of length {len(w)} is outside a block of height {b.height}")
    return b.labels[word_index(b.k, w)]


# --- JSON ---------------------------------------------------------------------


def system_to_json(sys: TransitionSystem) -> dict:
    out: dict = {}
    if sys.name is not None:
        out["name"] = sys.name
    out["k"] = sys.k
    out["d"] = sys.d
    out["matrices"] = [[list(r) for r in mat] for mat in sys.matrices]
    return out


def system_from_json(doc: dict) -> TransitionSystem:
    if not isinstance(doc, dict) or "matrices" not in doc:
        raise SystemError_('system document needs a "matrices" field')
    sys, _ = validate_system(doc["matrices"], name=doc.get("name"))
    if "k" in doc and doc["k"] != sys.k:
        raise SystemError_(f'"k" is {doc["k"]} but {sys.k} matrices were given')
    if "d" in doc and doc["d"] != sys.d:
        raise SystemError_(f'"d" is {doc["d"]} but the matrices are {sys.d}x{sys.d}')
    return sys


def load_json_file(path: str | Path):
    """Parse a JSON file, reporting syntax errors with line and column."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno - 1 < len(text.splitlines()) else ""
        raise SystemError_(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n  {line}") from None


def load_system(path: str | Path) -> TransitionSystem:
    return system_from_json(load_json_file(path))


def block_to_json(b: Block) -> dict:
    return {"k": b.k, "d": b.d, "height": b.height, "labels": list(b.labels)}


def block_from_json(doc: dict) -> Block:
    try:
        return Block(int(doc["k"]), int(doc["d"]), int(doc["height"]), tuple(int(v) for v in doc["labels"]))
    except KeyError as exc:
        raise SystemError_(f"block document is missing {exc}") from None
