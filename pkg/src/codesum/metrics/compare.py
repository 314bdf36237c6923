"""Per-method comparisons between systems and whole-corpus evaluation reports."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

from .bleu import bleu_scores, sentence_bleu


@dataclass
class EvalReport:
    bleu: float
    bleu1: float
    bleu2: float
    bleu3: float
    bleu4: float
    first_word_accuracy: float
    n_methods: int
    sentence_scores: dict = field(default_factory=dict)

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("sentence_scores")
        return d


def sentence_scores(preds: Mapping, refs: Mapping, smoothing: str = "epsilon") -> dict:
    return {k: sentence_bleu(preds[k], refs[k], smoothing=smoothing) for k in sorted(refs, key=str)}


def first_word_accuracy(preds: Mapping, refs: Mapping) -> float:
    """Share of methods whose first generated word equals the reference's first word."""
    if set(preds) != set(refs):
        raise KeyError("prediction and reference ids differ")
    if not refs:
        return 0.0
    hits = sum(1 for k in refs if preds[k] and refs[k] and preds[k][0] == refs[k][0])
    return hits / len(refs)


def orthogonality(
    preds_a: Mapping, preds_b: Mapping, refs: Mapping, smoothing: str = "epsilon"
) -> tuple[int, int, int, list[tuple]]:
    """Counts of methods where A scores higher, B scores higher, or they tie.

    Both systems are scored with the same sentence-BLEU smoothing. The last
    element holds ``(id, score_a, score_b)`` rows for export.
    """
    if not (set(preds_a) == set(preds_b) == set(refs)):
        raise KeyError("prediction and reference ids differ")
    a_better = b_better = ties = 0
    rows = []
    for k in sorted(refs, key=str):
        sa = sentence_bleu(preds_a[k], refs[k], smoothing=smoothing)
        sb = sentence_bleu(preds_b[k], refs[k], smoothing=smoothing)
        if sa > sb:
            a_better += 1
        elif sb > sa:
            b_better += 1
        else:
            ties += 1
        rows.append((k, sa, sb))
    return a_better, b_better, ties, rows


def evaluate(
    preds: Mapping[object, Sequence[str]],
    refs: Mapping[object, Sequence[str]],
    smoothing: str = "none",
    sentence_smoothing: str = "epsilon",
) -> EvalReport:
    if set(preds) != set(refs):
        raise KeyError("prediction and reference ids differ")
    scores = bleu_scores(preds, refs, smoothing)
    return EvalReport(
        **scores,
        first_word_accuracy=first_word_accuracy(preds, refs),
        n_methods=len(refs),
        sentence_scores=sentence_scores(preds, refs, sentence_smoothing),
    )
