"""Comment and identifier text processing."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Iterable

_WORD_RUN = re.compile(r"[A-Za-z]+")
_CAMEL_PART = re.compile(r"[A-Z]+(?![a-z])|[A-Z]?[a-z]+")
_JAVA_COMMENT = re.compile(r"//[^\n]*|/\*.*?\*/", re.DOTALL)
_STRIP_EDGE = re.compile(r"^\s*\*+ ?")


def _data_lines(name: str) -> tuple[str, ...]:
    text = resources.files("codesum.corpus").joinpath(f"data/{name}").read_text("utf-8")
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return tuple(out)


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    return frozenset(_data_lines("stopwords.txt"))


@lru_cache(maxsize=None)
def default_autogen_phrases() -> tuple[str, ...]:
    return _data_lines("autogen_phrases.txt")


def extract_summary(javadoc_raw: str | None) -> str | None:
    """First sentence of a JavaDoc comment, or None if it is not one.

    Markup is stripped first: the ``/**``/``*/`` fences, leading asterisks on
    each line, and every line starting with an ``@`` block tag. The sentence
    ends at the first period, or at the first newline when there is no period.
    """
    if not javadoc_raw:
        return None
    text = javadoc_raw.strip()
    if not text.startswith("/**"):
        return None
    text = text[3:]
    if text.endswith("*/"):
        text = text[:-2]
    lines = []
    for line in text.splitlines():
        line = _STRIP_EDGE.sub("", line).strip()
        if line.startswith("@"):
            continue
        lines.append(line)
    body = "\n".join(lines).strip()
    if "." in body:
        sentence = body.split(".", 1)[0]
    else:
        sentence = body.split("\n", 1)[0]
    sentence = " ".join(sentence.split())
    return sentence or None


def is_english(
    text: str,
    stopwords: Iterable[str] | None = None,
    min_stopword_hits: int = 1,
    min_ascii_letter_ratio: float = 0.8,
) -> bool:
    """Cheap deterministic English check.

    Needs at least ``min_stopword_hits`` English function words and a share of
    ASCII letters among non-space characters of at least ``min_ascii_letter_ratio``.
    """
    chars = [c for c in text if not c.isspace()]
    if not chars:
        return False
    ascii_letters = sum(1 for c in chars if c.isascii() and c.isalpha())
    if ascii_letters / len(chars) < min_ascii_letter_ratio:
        return False
    stop = default_stopwords() if stopwords is None else frozenset(stopwords)
    # whole whitespace-delimited words only, so "l'url" never counts as "l"
    hits = sum(1 for w in text.lower().split() if w.strip(".,;:!?()\"'") in stop)
    return hits >= min_stopword_hits


def is_autogenerated(file_text: str, phrases: Iterable[str] | None = None) -> bool:
    """True when any marker phrase occurs on a single line (case-insensitive)."""
    phrases = default_autogen_phrases() if phrases is None else tuple(phrases)
    lowered = [p.lower() for p in phrases]
    for line in file_text.lower().splitlines():
        if any(p in line for p in lowered):
            return True
    return False


def split_identifier(word: str) -> list[str]:
    """``getPlayerScore`` -> ``['get', 'Player', 'Score']``; case is preserved."""
    return _CAMEL_PART.findall(word)


def tokenize(text: str, kind: str = "comment") -> list[str]:
    """Lowercase alphabetic words split on camelCase, underscores and non-letters.

    ``kind="code"`` additionally drops Java comments before splitting.
    No stemming is applied.
    """
    if kind not in ("code", "comment"):
        raise ValueError(f"kind must be 'code' or 'comment', got {kind!r}")
    if kind == "code":
        text = _JAVA_COMMENT.sub(" ", text)
    out = []
    for run in _WORD_RUN.findall(text):
        out.extend(part.lower() for part in split_identifier(run))
    return out
