"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

from typing import Iterable, Sequence

from .ast import AstNode
from .corpus import ProcessedExample


def check_sources(X, name: str = "X") -> list:
    """A non-empty list of Java method strings, trees, or processed examples."""
    if isinstance(X, (str, bytes)):
        raise TypeError(f"{name} must be a sequence of methods, not a single string")
    items = list(X)
    if not items:
        raise ValueError(f"{name} is empty")
    kinds = {type(x) for x in items}
    allowed = (str, AstNode, ProcessedExample)
    bad = [k for k in kinds if not issubclass(k, allowed)]
    if bad:
        raise TypeError(f"{name} holds unsupported element types {[k.__name__ for k in bad]}")
    if len(kinds) > 1:
        raise TypeError(f"{name} mixes element types {[k.__name__ for k in kinds]}")
    return items


def check_summaries(y, n: int) -> list[str]:
    if isinstance(y, str):
        raise TypeError("y must be a sequence of summaries, not a single string")
    items = [str(s) for s in y]
    if len(items) != n:
        raise ValueError(f"X has {n} methods but y has {len(items)} summaries")
    return items


def check_positive(**values: int):
    for key, value in values.items():
        if int(value) <= 0:
            raise ValueError(f"{key} must be a positive integer, got {value!r}")


def check_choice(name: str, value, choices: Iterable):
    choices = tuple(choices)
    if value not in choices:
        raise ValueError(f"{name} must be one of {choices}, got {value!r}")


def check_ratios(ratios: Sequence[float]):
    if len(ratios) != 3 or any(r <= 0 for r in ratios) or abs(sum(ratios) - 1) > 1e-9:
        raise ValueError(f"split ratios must be three positive numbers summing to 1, got {tuple(ratios)}")
