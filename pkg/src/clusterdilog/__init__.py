"""Exact cluster mutation, exchange-graph loops, and the dilogarithm identities they induce."""

from .fixtures import REGISTRY, Fixture, akan
from .graph import Closure, GraphSlice, LoopReport, canonical_key, explore, export_dot, rank2_loops, verify_loop
from .identities import identity_from_loop, parse_word, format_word, rank2_identity, split_identity
from .mutation import (
    ExchangeMatrix,
    Rank2Type,
    SeedState,
    apply_sequence,
    initial_seed,
    mutate_matrix,
    mutate_seed,
    random_sample_point,
    rank2_class,
    validate_matrix,
)
from .qrat import QRat
from .qtorus import DilogFactor, DilogWord, TruncatedSeries, verify_identity, word_to_series
from .rewrite import RewriteMove, RewriteTrace, check_trace, search_rewrite
from .rogers import five_term_check, loop_sum_check, rogers_L

__version__ = "0.1.0"

__all__ = [
    "REGISTRY", "Closure", "DilogFactor", "Fixture", "akan", "DilogWord", "ExchangeMatrix", "GraphSlice", "LoopReport", "QRat",
    "Rank2Type", "RewriteMove", "RewriteTrace", "SeedState", "TruncatedSeries",
    "apply_sequence", "canonical_key", "check_trace", "explore", "export_dot", "five_term_check",
    "format_word", "identity_from_loop", "initial_seed", "loop_sum_check", "mutate_matrix",
    "mutate_seed", "parse_word", "random_sample_point", "rank2_class", "rank2_identity",
    "rank2_loops", "rogers_L", "search_rewrite", "split_identity", "validate_matrix",
    "verify_identity", "verify_loop", "word_to_series",
]
