"""Java method parsing, srcML ingestion and SBT / SBT-AO flattening."""

from .flatten import (
    OTHER,
    ApiWhitelist,
    check_balanced,
    sbt_ao_flatten,
    sbt_flatten,
    sbt_unflatten,
)
from .nodes import LABELS, WORD_LABELS, AstNode, leaf, node
from .parser import ParseError, parse_method, tokenize_java
from .srcml import SrcmlError, from_xml, to_xml

__all__ = [
    "LABELS",
    "OTHER",
    "WORD_LABELS",
    "ApiWhitelist",
    "AstNode",
    "ParseError",
    "SrcmlError",
    "check_balanced",
    "from_xml",
    "leaf",
    "node",
    "parse_method",
    "sbt_ao_flatten",
    "sbt_flatten",
    "sbt_unflatten",
    "to_xml",
    "tokenize_java",
]
