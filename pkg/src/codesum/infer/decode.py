"""Greedy and ensemble decoding.

A decodable model exposes ``config.comlen``, ``config.comvocabsize``,
``encode(inputs)`` and ``next_word_probs(encoded, prefix)``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..corpus import END_ID, PAD_ID, START_ID, Vocab

# never emitted: padding and the start token
_BLOCKED = (PAD_ID, START_ID)


def _batch_size(inputs: dict) -> int:
    return next(iter(inputs.values())).shape[0]


def pick_next(probs: np.ndarray) -> np.ndarray:
    """Argmax per row over eligible words; ties go to the lowest index."""
    masked = np.array(probs, dtype=np.float64, copy=True)
    masked[:, list(_BLOCKED)] = -np.inf
    return masked.argmax(axis=1)


def _run(models, inputs_list, maxlen, record=None, batch_size=None) -> list[list[int]]:
    comlen = models[0].config.comlen
    vocab_size = models[0].config.comvocabsize
    for m in models[1:]:
        if m.config.comvocabsize != vocab_size or m.config.comlen != comlen:
            raise ValueError("ensemble members must share the comment vocabulary and comlen")
    n = _batch_size(inputs_list[0])
    if any(_batch_size(inp) != n for inp in inputs_list):
        raise ValueError("ensemble inputs disagree on the number of methods")
    batch_size = batch_size or n or 1
    steps = min(maxlen or comlen, comlen) - 1
    out: list[list[int]] = []
    for lo in range(0, n, batch_size):
        hi = min(lo + batch_size, n)
        chunk = [{k: v[lo:hi] for k, v in inp.items()} for inp in inputs_list]
        encs = [m.encode(inp) for m, inp in zip(models, chunk)]
        b = hi - lo
        prefix = np.zeros((b, comlen), dtype=np.int64)
        prefix[:, 0] = START_ID
        done = np.zeros(b, dtype=bool)
        words: list[list[int]] = [[] for _ in range(b)]
        for k in range(1, steps + 1):
            if record is not None:
                probs, attn, _ = models[0].decode(encs[0], prefix)
                record.append({name: a.copy() for name, a in attn.items()})
            else:
                probs = models[0].next_word_probs(encs[0], prefix)
            if len(models) > 1:
                probs = probs.astype(np.float64)
                for m, enc in zip(models[1:], encs[1:]):
                    probs = probs + m.next_word_probs(enc, prefix)
                probs = probs / len(models)
            nxt = pick_next(probs)
            for i in np.flatnonzero(~done):
                if nxt[i] == END_ID:
                    done[i] = True
                else:
                    words[i].append(int(nxt[i]))
            prefix[:, k] = np.where(done, PAD_ID, nxt)
            if done.all():
                break
        out.extend(words)
    return out


def greedy_decode(model, inputs: dict, maxlen: int | None = None, batch_size: int | None = None) -> list[list[int]]:
    """Comment word indices (delimiters excluded) for every method in ``inputs``.

    Decoding starts from the start token and appends the argmax word until
    the end token or ``maxlen`` slots (default ``comlen``) are used.
    """
    return _run([model], [inputs], maxlen, batch_size=batch_size)


def greedy_decode_with_attention(model, inputs: dict, maxlen: int | None = None):
    """Like :func:`greedy_decode` for a single method, also returning per-step attention."""
    if _batch_size(inputs) != 1:
        raise ValueError("attention capture decodes exactly one method")
    steps: list[dict] = []
    words = _run([model], [inputs], maxlen, record=steps)[0]
    return words, [{k: v[0] for k, v in s.items()} for s in steps]


def ensemble_decode(
    models: Sequence,
    inputs: Sequence[dict],
    maxlen: int | None = None,
    vocabs: Sequence[Vocab] | None = None,
    batch_size: int | None = None,
) -> list[list[int]]:
    """Greedy decoding on the element-wise mean of the members' output distributions.

    The chosen word is fed back to every member. ``inputs`` holds one input
    dict per model (members may use different encoders).
    """
    if not models:
        raise ValueError("ensemble needs at least one model")
    if len(inputs) != len(models):
        raise ValueError("one input dict per ensemble member is required")
    if vocabs is not None and any(v != vocabs[0] for v in vocabs[1:]):
        raise ValueError("ensemble members must share the comment vocabulary")
    return _run(list(models), list(inputs), maxlen, batch_size=batch_size)


def indices_to_words(indices: Sequence[Sequence[int]], vocab: Vocab) -> list[list[str]]:
    return [vocab.decode(seq) for seq in indices]
