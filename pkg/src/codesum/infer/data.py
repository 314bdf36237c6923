"""Turning processed examples into framed index arrays and teacher-forcing pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..corpus import END, END_ID, PAD_ID, START, START_ID, ProcessedExample, Vocab, frame_batch

# token view name -> (ProcessedExample attribute, vocabulary key)
VIEWS = {"code": ("code_tokens", "txt"), "sbtao": ("ast_tokens", "ast"), "sbt": ("sbt_tokens", "sbt")}

def sources_for(config) -> dict[str, str]:
    """Token view feeding each input slot of a model."""
    sources = {"txt": config.txt_view}
    if config.uses_ast:
        sources["ast"] = config.ast_view
    return sources


def lengths_for(config) -> dict[str, int]:
    return {"txt": config.txtlen, "ast": config.astlen, "com": config.comlen}


@dataclass
class EncodedSet:
    """Framed model inputs for a list of methods."""

    ids: list
    inputs: dict[str, np.ndarray]
    comments: np.ndarray  # [n, comlen] framed comment indices (start ... end, 0-padded)
    references: list[list[str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.ids)

    def subset(self, rows) -> EncodedSet:
        rows = np.asarray(rows, dtype=np.int64)
        return EncodedSet(
            [self.ids[i] for i in rows],
            {k: v[rows] for k, v in self.inputs.items()},
            self.comments[rows],
            [self.references[i] for i in rows] if self.references else [],
        )


def strip_delimiters(tokens: Sequence[str]) -> list[str]:
    return [t for t in tokens if t not in (START, END)]


def encode_examples(
    examples: Sequence[ProcessedExample],
    sources: Mapping[str, str],
    vocabs: Mapping[str, Vocab],
    lengths: Mapping[str, int],
) -> EncodedSet:
    """``lengths`` maps input slots (``txt``, ``ast``, ``com``) to their frame lengths."""
    inputs = {}
    for slot, view in sources.items():
        attr, vkey = VIEWS[view]
        inputs[slot] = frame_batch([getattr(e, attr) for e in examples], lengths[slot], vocabs[vkey])
    comments = frame_batch([e.comment_tokens for e in examples], lengths["com"], vocabs["com"])
    refs = [strip_delimiters(e.comment_tokens) for e in examples]
    return EncodedSet([e.id for e in examples], inputs, comments, refs)


@dataclass
class TrainingPair:
    encoder: dict[str, np.ndarray]
    prefix: np.ndarray
    target: int


def _pair_positions(comment: Sequence[int]) -> range:
    comment = list(comment)
    while comment and comment[-1] == PAD_ID:
        comment.pop()
    if len(comment) < 2 or comment[0] != START_ID:
        return range(0)
    if END_ID in comment[1:]:
        last = comment.index(END_ID, 1)
        if last == 1:
            return range(0)  # no words between the delimiters
    else:
        last = len(comment) - 1  # truncated: no end token to predict
    return range(1, last + 1)


def expand_pairs(
    encoder: Mapping[str, np.ndarray], comment: Sequence[int], comlen: int
) -> list[TrainingPair]:
    """Teacher forcing: one pair per position k, prefix ``comment[:k]`` zero-padded to
    ``comlen`` and target ``comment[k]``, up to and including the end token."""
    comment = np.asarray(comment, dtype=np.int64)
    pairs = []
    for k in _pair_positions(comment):
        prefix = np.zeros(comlen, dtype=np.int64)
        prefix[:k] = comment[:k]
        pairs.append(TrainingPair(dict(encoder), prefix, int(comment[k])))
    return pairs


@dataclass
class PairIndex:
    """All teacher-forcing pairs of an :class:`EncodedSet`, stored by reference."""

    rows: np.ndarray      # source row in the EncodedSet per pair
    prefixes: np.ndarray  # [n_pairs, comlen]
    targets: np.ndarray   # [n_pairs]
    skipped: int = 0      # methods contributing no pairs

    def __len__(self) -> int:
        return len(self.targets)


def expand_dataset(data: EncodedSet) -> PairIndex:
    comlen = data.comments.shape[1]
    rows, prefixes, targets = [], [], []
    skipped = 0
    for row, comment in enumerate(data.comments):
        positions = _pair_positions(comment)
        if not positions:
            skipped += 1
        for k in positions:
            prefix = np.zeros(comlen, dtype=np.int64)
            prefix[:k] = comment[:k]
            rows.append(row)
            prefixes.append(prefix)
            targets.append(int(comment[k]))
    return PairIndex(
        np.asarray(rows, dtype=np.int64),
        np.asarray(prefixes, dtype=np.int64).reshape(-1, comlen),
        np.asarray(targets, dtype=np.int64),
        skipped,
    )


def batch_inputs(data: EncodedSet, pairs: PairIndex, sel: np.ndarray) -> tuple[dict, np.ndarray]:
    rows = pairs.rows[sel]
    inputs = {k: v[rows] for k, v in data.inputs.items()}
    inputs["com"] = pairs.prefixes[sel]
    return inputs, pairs.targets[sel]
