"""Corpus and sentence BLEU with clipped n-gram precision and brevity penalty.

Scores are on the percent scale (0-100). Corpus scores are unsmoothed: any
weighted n-gram order with zero matches yields 0. Sentence scores default to
add-epsilon smoothing, replacing a zero match count by ``epsilon``.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Mapping, Sequence

COMPOSITE_WEIGHTS = (0.25, 0.25, 0.25, 0.25)
SMOOTHING_MODES = ("none", "epsilon")


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def individual_weights(n: int, max_n: int = 4) -> tuple[float, ...]:
    """Weight 1 on order ``n`` only (BLEU-n)."""
    return tuple(1.0 if k == n else 0.0 for k in range(1, max_n + 1))


def _align(candidates, references) -> tuple[list, list]:
    if isinstance(candidates, Mapping) or isinstance(references, Mapping):
        if not (isinstance(candidates, Mapping) and isinstance(references, Mapping)):
            raise TypeError("candidates and references must both be mappings or both sequences")
        if set(candidates) != set(references):
            missing = sorted(set(references) - set(candidates), key=str)[:5]
            extra = sorted(set(candidates) - set(references), key=str)[:5]
            raise KeyError(f"candidate/reference keys differ (missing {missing}, extra {extra})")
        keys = sorted(references, key=str)
        return [list(candidates[k]) for k in keys], [list(references[k]) for k in keys]
    if len(candidates) != len(references):
        raise ValueError(f"{len(candidates)} candidates vs {len(references)} references")
    return [list(c) for c in candidates], [list(r) for r in references]


def modified_precision_counts(candidate: Sequence[str], reference: Sequence[str], n: int) -> tuple[int, int]:
    """(clipped matches, candidate n-gram total) for one sentence pair."""
    cand = ngrams(candidate, n)
    ref = ngrams(reference, n)
    clipped = sum(min(count, ref[g]) for g, count in cand.items())
    return clipped, max(len(candidate) - n + 1, 0)


def brevity_penalty(cand_len: int, ref_len: int) -> float:
    if cand_len == 0:
        return 0.0
    if cand_len > ref_len:
        return 1.0
    return math.exp(1 - ref_len / cand_len)


def _score(matches, totals, cand_len, ref_len, weights, smoothing, epsilon) -> float:
    if smoothing not in SMOOTHING_MODES:
        raise ValueError(f"smoothing must be one of {SMOOTHING_MODES}, got {smoothing!r}")
    if cand_len == 0:
        return 0.0
    log_sum = 0.0
    for w, m, t in zip(weights, matches, totals):
        if w == 0:
            continue
        if m == 0:
            if smoothing == "none":
                return 0.0
            p = epsilon / max(t, 1)
        else:
            p = m / t
        log_sum += w * math.log(p)
    return 100.0 * brevity_penalty(cand_len, ref_len) * math.exp(log_sum)


def corpus_bleu(
    candidates,
    references,
    max_n: int = 4,
    weights: Sequence[float] | None = None,
    smoothing: str = "none",
    epsilon: float = 0.1,
) -> float:
    """Corpus-level BLEU: n-gram matches and totals are summed over all pairs first.

    ``candidates``/``references`` are aligned sequences of token lists, or
    mappings keyed by method id (keys must agree).
    """
    weights = tuple(weights) if weights is not None else tuple([1.0 / max_n] * max_n)
    if len(weights) != max_n:
        raise ValueError(f"need {max_n} weights, got {len(weights)}")
    cands, refs = _align(candidates, references)
    matches = [0] * max_n
    totals = [0] * max_n
    cand_len = ref_len = 0
    for c, r in zip(cands, refs):
        cand_len += len(c)
        ref_len += len(r)
        for n in range(1, max_n + 1):
            m, t = modified_precision_counts(c, r, n)
            matches[n - 1] += m
            totals[n - 1] += t
    return _score(matches, totals, cand_len, ref_len, weights, smoothing, epsilon)


def sentence_bleu(
    candidate: Sequence[str],
    reference: Sequence[str],
    max_n: int = 4,
    weights: Sequence[float] | None = None,
    smoothing: str = "epsilon",
    epsilon: float = 0.1,
) -> float:
    return corpus_bleu([candidate], [reference], max_n, weights, smoothing, epsilon)


def bleu_scores(candidates, references, smoothing: str = "none") -> dict[str, float]:
    """Composite BLEU plus BLEU1..BLEU4 (individual n-gram orders)."""
    out = {"bleu": corpus_bleu(candidates, references, 4, COMPOSITE_WEIGHTS, smoothing)}
    for n in range(1, 5):
        out[f"bleu{n}"] = corpus_bleu(candidates, references, 4, individual_weights(n), smoothing)
    return out
