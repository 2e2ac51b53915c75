"""Complexity, entropy and topological dynamics of Markov tree-shifts."""

from .complexity import complexity_exact, complexity_log, oracle_count_blocks, step_counts
from .core import Block, TransitionSystem, canonical_binary_catalog, catalog_system, validate_system
from .entropy import bounds_report, h_bc_estimate, h_ps_estimate
from .recode import ForbiddenSet, higher_block_presentation, verify_recoding
from .topology import PrefixSet, classify_chaos, decide_irreducible, decide_mixing, verify_cps

__version__ = "0.1.0"

__all__ = [
    "Block",
    "ForbiddenSet",
    "PrefixSet",
    "TransitionSystem",
    "bounds_report",
    "canonical_binary_catalog",
    "catalog_system",
    "classify_chaos",
    "complexity_exact",
    "complexity_log",
    "decide_irreducible",
    "decide_mixing",
    "h_bc_estimate",
    "h_ps_estimate",
    "higher_block_presentation",
    "oracle_count_blocks",
    "step_counts",
    "validate_system",
    "verify_cps",
    "verify_recoding",
]
