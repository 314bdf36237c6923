"""Read srcML-style XML into :class:`AstNode` trees."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .nodes import LABELS, WORD_LABELS, AstNode

# srcML annotations that carry no structure worth keeping.
IGNORED_ELEMENTS = frozenset({"comment", "position"})


class SrcmlError(ValueError):
    pass


def _local_name(tag: str) -> str:
    # "{http://www.srcML.org/srcML/src}name" -> "name"; "pos:position" style prefixes are
    # already resolved to namespace URIs by the parser.
    return tag.rsplit("}", 1)[-1]


def _convert(elem: ET.Element) -> AstNode:
    label = _local_name(elem.tag)
    if label not in LABELS:
        raise SrcmlError(f"unknown srcML element <{label}>")
    children = [
        _convert(child) for child in elem if _local_name(child.tag) not in IGNORED_ELEMENTS
    ]
    if children:
        return AstNode(label, None, children)
    word = None
    if label in WORD_LABELS:
        word = " ".join("".join(elem.itertext()).split()) or None
    return AstNode(label, word)


def from_xml(xml: str | bytes) -> AstNode:
    """Convert one srcML document (or fragment) to a tree.

    Element names become labels; the text of word-bearing leaf elements
    (``name``, ``operator``, ``specifier``, ``literal``) becomes the node's
    word. Punctuation text between elements, and text of structural leaves
    such as ``<parameter_list>()</parameter_list>``, is dropped.
    """
    if isinstance(xml, str):
        xml = xml.encode("utf-8")
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as exc:
        raise SrcmlError(f"malformed XML: {exc}") from exc
    return _convert(root)


def to_xml(tree: AstNode) -> str:
    """Inverse of :func:`from_xml` up to dropped punctuation; handy for fixtures."""

    def build(n: AstNode) -> ET.Element:
        elem = ET.Element(n.label)
        if n.word is not None:
            elem.text = n.word
        for child in n.children:
            elem.append(build(child))
        return elem

    return ET.tostring(build(tree), encoding="unicode")
