"""Tree type shared by the parser, the XML reader and the flatteners."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

# srcML element names the parser and the XML reader may emit.
LABELS = frozenset(
    {
        "unit", "function", "constructor", "specifier", "annotation", "type",
        "name", "parameter_list", "parameter", "decl", "init", "block",
        "decl_stmt", "expr_stmt", "expr", "operator", "call", "argument_list",
        "argument", "literal", "index", "return", "if", "condition", "then",
        "else", "for", "control", "incr", "range", "while", "do", "try",
        "catch", "finally", "throw", "throws", "break", "continue",
        "empty_stmt",
    }
)

# Only these labels carry a surface word; every other label is pure structure.
WORD_LABELS = frozenset({"name", "operator", "specifier", "literal"})


@dataclass
class AstNode:
    label: str
    word: str | None = None
    children: list[AstNode] = field(default_factory=list)

    def __post_init__(self):
        if not self.label or any(c.isspace() for c in self.label):
            raise ValueError(f"invalid node label {self.label!r}")
        if self.word == "":
            self.word = None
        if self.word is not None and self.children:
            raise ValueError(f"word-bearing node {self.label!r} cannot have children")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator[AstNode]:
        """Pre-order traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def words(self) -> list[str]:
        return [n.word for n in self.walk() if n.word is not None]

    def __str__(self) -> str:
        if self.word is not None:
            return f"{self.label}:{self.word}"
        if not self.children:
            return self.label
        return f"{self.label}({', '.join(str(c) for c in self.children)})"


def leaf(label: str, word: str | None = None) -> AstNode:
    return AstNode(label, word)


def node(label: str, *children: AstNode) -> AstNode:
    return AstNode(label, None, list(children))
