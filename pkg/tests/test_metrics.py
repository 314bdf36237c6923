import json
import math
import random

import pytest
from oracles import brute_force_corpus_bleu

from codesum.metrics import (
    bleu_scores,
    brevity_penalty,
    corpus_bleu,
    evaluate,
    first_word_accuracy,
    modified_precision_counts,
    orthogonality,
    read_summaries,
    sentence_bleu,
    write_report,
    write_summaries,
)

WORDS = "sets the token url returns value of a closes connection".split()


def random_micro_corpora(count=100, seed=0):
    """Small corpora whose references are noisy edits of the candidates."""
    rng = random.Random(seed)
    vocab = WORDS[:4]
    for _ in range(count):
        cands, refs = [], []
        for _ in range(rng.randint(1, 6)):
            cand = [rng.choice(vocab) for _ in range(rng.randint(1, 9))]
            ref = [w if rng.random() < 0.7 else rng.choice(vocab) for w in cand]
            ref = ref[: rng.randint(1, len(ref))] + [rng.choice(vocab) for _ in range(rng.randint(0, 3))]
            cands.append(cand)
            refs.append(ref)
        yield cands, refs


def test_corpus_bleu_matches_brute_force_oracle():
    nonzero = 0
    for cands, refs in random_micro_corpora():
        ours = corpus_bleu(cands, refs)
        assert abs(ours - brute_force_corpus_bleu(cands, refs)) < 1e-9
        nonzero += ours > 0
        for n in range(1, 5):
            w = tuple(1.0 if k == n else 0.0 for k in range(1, 5))
            assert abs(corpus_bleu(cands, refs, weights=w) - brute_force_corpus_bleu(cands, refs, w)) < 1e-9
    assert nonzero >= 40  # the generator must exercise the non-degenerate branch


def test_identical_corpus_scores_100():
    refs = [["sets", "the", "token", "url"], ["returns", "the", "value", "of", "a", "thing"]]
    assert corpus_bleu(refs, refs) == pytest.approx(100.0)


def test_duplication_invariance():
    for cands, refs in random_micro_corpora(30, seed=9):
        assert corpus_bleu(cands * 3, refs * 3) == pytest.approx(corpus_bleu(cands, refs), abs=1e-9)


def test_sentence_bleu_hand_computed():
    cand = "sets the token url".split()
    ref = "returns the url of the token".split()
    # p1 = 3/4, p2 = 1/3 ("the token"), p3 = 0.1/2, p4 = 0.1/1, BP = exp(1 - 6/4)
    expected = 100 * math.exp(-0.5) * (0.75 * (1 / 3) * 0.05 * 0.1) ** 0.25
    assert sentence_bleu(cand, ref) == pytest.approx(expected, abs=1e-9)
    assert sentence_bleu(cand, ref, smoothing="none") == 0.0


def test_modified_precision_clips():
    assert modified_precision_counts(["the"] * 7, ["the", "cat", "the"], 1) == (2, 7)


def test_brevity_penalty():
    assert brevity_penalty(5, 4) == 1.0
    assert brevity_penalty(4, 4) == 1.0
    assert brevity_penalty(2, 4) == pytest.approx(math.exp(-1))
    assert brevity_penalty(0, 4) == 0.0


def test_mapping_keys_must_agree():
    with pytest.raises(KeyError):
        corpus_bleu({1: ["a"]}, {2: ["a"]})
    with pytest.raises(ValueError):
        corpus_bleu([["a"]], [["a"], ["b"]])


def test_bleu_scores_keys():
    scores = bleu_scores([["a", "b"]], [["a", "b"]])
    assert set(scores) == {"bleu", "bleu1", "bleu2", "bleu3", "bleu4"}
    assert scores["bleu1"] == pytest.approx(100.0) and scores["bleu3"] == 0.0


def test_first_word_accuracy():
    preds = {1: ["sets", "x"], 2: ["gets"], 3: []}
    refs = {1: ["sets", "y"], 2: ["returns"], 3: ["closes"]}
    assert first_word_accuracy(preds, refs) == pytest.approx(1 / 3)


def test_orthogonality_counts():
    refs = {1: "sets the value".split(), 2: "returns the value".split(), 3: "closes it".split()}
    a = {1: "sets the value".split(), 2: "sets the value".split(), 3: "x".split()}
    b = {1: "sets a value".split(), 2: "returns the value".split(), 3: "y".split()}
    a_better, b_better, ties, rows = orthogonality(a, b, refs)
    assert (a_better, b_better, ties) == (1, 1, 1)
    assert [r[0] for r in rows] == [1, 2, 3]


def test_evaluate_and_report_files(tmp_path):
    preds = {"1": ["sets", "the", "value"], "2": ["returns", "it"]}
    refs = {"1": ["sets", "the", "value"], "2": ["returns", "the", "value"]}
    report = evaluate(preds, refs)
    assert report.n_methods == 2 and report.first_word_accuracy == 1.0
    write_report(tmp_path, report, system="m")
    data = json.loads((tmp_path / "eval.json").read_text())
    assert data["bleu"] == pytest.approx(report.bleu)
    lines = (tmp_path / "permethod.tsv").read_text().splitlines()
    assert lines[0] == "id\tm" and len(lines) == 3


def test_summaries_round_trip_drops_delimiters(tmp_path):
    write_summaries(tmp_path / "p.tsv", {10: ["a", "b"], 2: ["c"]})
    assert (tmp_path / "p.tsv").read_text() == "2\tc\n10\ta b\n"
    (tmp_path / "q.tsv").write_text("1\t<s> a b </s>\n")
    assert read_summaries(tmp_path / "q.tsv") == {"1": ["a", "b"]}


def test_read_summaries_rejects_duplicates(tmp_path):
    (tmp_path / "d.tsv").write_text("1\ta\n1\tb\n")
    with pytest.raises(ValueError, match="duplicate"):
        read_summaries(tmp_path / "d.tsv")
