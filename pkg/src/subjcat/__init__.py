"""Overlap analysis of two journal subject classification systems."""

from .corpus import (
    AmbiguousMatchError,
    Category,
    Corpus,
    CorpusError,
    EmptyCorpusError,
    JournalRecord,
    MatchedJournal,
    ParseError,
    build_corpus,
    corpus_stats,
    match_journals,
    normalize_identifier,
    read_journal_table,
)
from .cover import CoverInstance, CoverResult, cover_survey, exact_cover, greedy_cover, meta_cover
from .metrics import dispersion, pearson, percentile_ranks, score_buckets, wilcoxon_signed_rank
from .report import RunConfig, histogram, run_pipeline, size_extremes
from .setalgebra import closeness, intersection_histogram, relate, similarity_sweep

__version__ = "0.1.0"
