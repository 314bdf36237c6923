"""Word/index vocabularies and fixed-length framing."""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .._io import write_text

PAD, UNK, START, END = "<NULL>", "<UNK>", "<s>", "</s>"
RESERVED = (PAD, UNK, START, END)
PAD_ID, UNK_ID, START_ID, END_ID = range(4)


class Vocab:
    """Bidirectional word/index map; indices 0-3 are PAD, UNK, start, end."""

    def __init__(self, words: Sequence[str]):
        words = list(words)
        if tuple(words[:4]) != RESERVED:
            raise ValueError(f"vocabulary must start with the reserved tokens {RESERVED}")
        if len(set(words)) != len(words):
            raise ValueError("duplicate words in vocabulary")
        self.itos = words
        self.stoi = {w: i for i, w in enumerate(words)}

    def __len__(self) -> int:
        return len(self.itos)

    def __contains__(self, word: str) -> bool:
        return word in self.stoi

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocab) and self.itos == other.itos

    def index(self, word: str) -> int:
        return self.stoi.get(word, UNK_ID)

    def word(self, idx: int) -> str:
        return self.itos[idx]

    def encode(self, tokens: Iterable[str]) -> list[int]:
        return [self.index(t) for t in tokens]

    def decode(self, indices: Iterable[int]) -> list[str]:
        return [self.itos[int(i)] for i in indices]

    def to_tsv(self) -> str:
        return "".join(f"{w}\t{i}\n" for i, w in enumerate(self.itos))

    @classmethod
    def from_tsv(cls, text: str) -> Vocab:
        pairs = []
        for line in text.splitlines():
            if not line:
                continue
            word, idx = line.rsplit("\t", 1)
            pairs.append((int(idx), word))
        pairs.sort()
        if [i for i, _ in pairs] != list(range(len(pairs))):
            raise ValueError("vocabulary indices must be contiguous from 0")
        return cls([w for _, w in pairs])

    def save(self, path: str | Path):
        write_text(path, self.to_tsv())

    @classmethod
    def load(cls, path: str | Path) -> Vocab:
        return cls.from_tsv(Path(path).read_text(encoding="utf-8"))


def build_vocab(sequences: Iterable[Iterable[str]], max_size: int) -> Vocab:
    """Most frequent words first (ties lexicographic), capped at ``max_size`` entries
    including the four reserved ones."""
    if max_size < len(RESERVED):
        raise ValueError(f"max_size must be at least {len(RESERVED)}")
    counts = Counter(w for seq in sequences for w in seq if w not in RESERVED)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return Vocab(list(RESERVED) + [w for w, _ in ranked[: max_size - len(RESERVED)]])


def frame_sequence(tokens: Sequence[str], target_len: int, vocab: Vocab) -> np.ndarray:
    """Indices right-padded with 0 or truncated to exactly ``target_len``."""
    out = np.zeros(target_len, dtype=np.int64)
    ids = vocab.encode(tokens[:target_len])
    out[: len(ids)] = ids
    return out


def frame_batch(sequences: Sequence[Sequence[str]], target_len: int, vocab: Vocab) -> np.ndarray:
    out = np.zeros((len(sequences), target_len), dtype=np.int64)
    for row, seq in enumerate(sequences):
        out[row] = frame_sequence(seq, target_len, vocab)
    return out
