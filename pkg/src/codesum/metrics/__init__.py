"""BLEU scoring and per-method system comparisons."""

from .bleu import (
    COMPOSITE_WEIGHTS,
    bleu_scores,
    brevity_penalty,
    corpus_bleu,
    individual_weights,
    modified_precision_counts,
    ngrams,
    sentence_bleu,
)
from .compare import EvalReport, evaluate, first_word_accuracy, orthogonality, sentence_scores
from .io import read_summaries, write_report, write_summaries

__all__ = [
    "COMPOSITE_WEIGHTS", "EvalReport", "bleu_scores", "brevity_penalty", "corpus_bleu",
    "evaluate", "first_word_accuracy", "individual_weights", "modified_precision_counts",
    "ngrams", "orthogonality", "read_summaries", "sentence_bleu", "sentence_scores",
    "write_report", "write_summaries",
]
