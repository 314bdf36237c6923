"""Structure-based traversal (SBT) and its AST-only variant (SBT-AO)."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .nodes import LABELS, WORD_LABELS, AstNode

OPEN, CLOSE = "(", ")"
OTHER = "OTHER"


@dataclass(frozen=True)
class ApiWhitelist:
    """Class names whose words are kept verbatim by :func:`sbt_ao_flatten`.

    Membership is case-sensitive.
    """

    names: frozenset[str] = field(default_factory=frozenset)

    def __contains__(self, word: object) -> bool:
        return word in self.names

    def __len__(self) -> int:
        return len(self.names)

    @classmethod
    def parse(cls, text: str) -> ApiWhitelist:
        names = set()
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                names.add(line)
        return cls(frozenset(names))

    @classmethod
    def from_file(cls, path: str | Path) -> ApiWhitelist:
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> ApiWhitelist:
        text = resources.files("codesum.ast").joinpath("data/java_lang.txt").read_text("utf-8")
        return cls.parse(text)


def _clean(word: str) -> str:
    # Tokens are written space-separated, so whitespace inside literals is folded.
    return "_".join(word.split())


def _flatten(root: AstNode, render_leaf) -> list[str]:
    out: list[str] = []
    stack: list[tuple[AstNode, bool]] = [(root, False)]
    while stack:
        n, closing = stack.pop()
        if closing:
            out += [CLOSE, n.label]
            continue
        if n.word is not None:
            out += render_leaf(n)
            continue
        out += [OPEN, n.label]
        stack.append((n, True))
        stack.extend((c, False) for c in reversed(n.children))
    return out


def sbt_flatten(root: AstNode) -> list[str]:
    """SBT tokens; a word-bearing leaf renders as ``( label_word ) label_word``."""

    def render(n: AstNode) -> list[str]:
        tag = f"{n.label}_{_clean(n.word)}"
        return [OPEN, tag, CLOSE, tag]

    return _flatten(root, render)


def sbt_ao_flatten(root: AstNode, whitelist: ApiWhitelist | Iterable[str] = ()) -> list[str]:
    """SBT-AO tokens: ``( label ) label_OTHER`` unless the word is whitelisted."""
    if not isinstance(whitelist, ApiWhitelist):
        whitelist = ApiWhitelist(frozenset(whitelist))

    def render(n: AstNode) -> list[str]:
        word = n.word if n.word in whitelist else OTHER
        return [OPEN, n.label, CLOSE, f"{n.label}_{_clean(word)}"]

    return _flatten(root, render)


def sbt_unflatten(
    tokens: list[str],
    labels: Iterable[str] = LABELS,
    word_labels: Iterable[str] = WORD_LABELS,
) -> AstNode:
    """Rebuild the tree from :func:`sbt_flatten` output.

    A leaf token is taken as a bare label when it is in ``labels``; otherwise
    it is split at the first ``word_label + "_"`` prefix it carries.
    """
    labels = set(labels)
    prefixes = sorted(word_labels, key=len, reverse=True)

    def split_leaf(tag: str) -> AstNode:
        if tag in labels:
            return AstNode(tag)
        for lab in prefixes:
            if tag.startswith(lab + "_") and len(tag) > len(lab) + 1:
                return AstNode(lab, tag[len(lab) + 1 :])
        raise ValueError(f"cannot split leaf token {tag!r}")

    stack: list[AstNode] = []
    root = None
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok == OPEN:
            if i + 3 < n and tokens[i + 2] == CLOSE and tokens[i + 3] == tokens[i + 1]:
                # leaf: ( tag ) tag
                child = split_leaf(tokens[i + 1])
                i += 4
            else:
                stack.append(AstNode(tokens[i + 1]))
                i += 2
                continue
        elif tok == CLOSE:
            child = stack.pop()
            if i + 1 >= n or tokens[i + 1] != child.label:
                raise ValueError(f"mismatched closing label at token {i}")
            i += 2
        else:
            raise ValueError(f"unexpected token {tok!r} at {i}")
        if stack:
            stack[-1].children.append(child)
        elif root is None and i == n:
            root = child
        else:
            raise ValueError("tokens describe more than one tree")
    if root is None or stack:
        raise ValueError("unbalanced token stream")
    return root


def check_balanced(tokens: list[str]) -> bool:
    """Parentheses balance and every closing label matches its opening label."""
    stack: list[str] = []
    for i, tok in enumerate(tokens):
        if tok == OPEN:
            if i + 1 >= len(tokens):
                return False
            stack.append(tokens[i + 1])
        elif tok == CLOSE:
            if not stack or i + 1 >= len(tokens):
                return False
            opened = stack.pop()
            closed = tokens[i + 1]
            # SBT-AO leaves close with label_word while opening with the bare label
            if closed != opened and not closed.startswith(opened + "_"):
                return False
    return not stack
