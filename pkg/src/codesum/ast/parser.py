"""Recursive-descent parser for single Java method declarations.

Produces srcML-shaped trees: expressions are kept flat (a sequence of
``name``/``operator``/``call``/``literal`` children under ``expr``), exactly
as srcML renders them, so precedence never has to be resolved.

Supported: modifiers and annotations, generic/array/qualified types,
constructors, ``throws``, local declarations, assignments, calls with dotted
receivers, ``new``, ``return``, ``if``/``else``, ``for`` (classic and
enhanced), ``while``, ``do``, ``try``/``catch``/``finally``, ``throw``,
``break``/``continue``. Anything else raises :class:`ParseError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .nodes import AstNode, leaf, node


class ParseError(ValueError):
    """Unsupported or malformed input; ``offset`` is a byte offset into the source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | char | op | eof
    text: str
    offset: int


MODIFIERS = frozenset(
    {
        "public", "private", "protected", "static", "final", "abstract",
        "synchronized", "native", "transient", "volatile", "strictfp", "default",
    }
)
LITERAL_WORDS = frozenset({"true", "false", "null"})
UNSUPPORTED_KEYWORDS = frozenset(
    {"switch", "case", "class", "interface", "enum", "assert", "goto", "const", "yield"}
)
STATEMENT_KEYWORDS = frozenset(
    {"return", "if", "else", "for", "while", "do", "try", "catch", "finally",
     "throw", "break", "continue", "new", "instanceof"}
)

_OPERATORS = sorted(
    """>>>= <<= >>= >>> ... -> :: == != <= >= && || ++ -- += -= *= /= %= &= |= ^= << >>
    = < > ! ~ ? : ; , . ( ) [ ] { } + - * / & | ^ % @""".split(),
    key=len,
    reverse=True,
)
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)+')
  | (?P<number>(?:0[xX][0-9a-fA-F_]+|0[bB][01_]+|(?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?)[lLfFdD]?)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<op>"""
    + "|".join(re.escape(op) for op in _OPERATORS)
    + r""")
    """,
    re.VERBOSE | re.DOTALL,
)


def _byte_offset(source: str, char_offset: int) -> int:
    return len(source[:char_offset].encode("utf-8"))


def tokenize_java(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos))
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), _byte_offset(source, pos)))
        pos = m.end()
    tokens.append(Token("eof", "", _byte_offset(source, len(source))))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize_java(source)
        self.pos = 0

    # -- token helpers -------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def fail(self, message: str, tok: Token | None = None):
        raise ParseError(message, (tok or self.tok).offset)

    def ident(self) -> Token:
        tok = self.tok
        if tok.kind != "ident":
            self.fail(f"expected identifier, found {tok.text or 'end of input'!r}")
        if tok.text in UNSUPPORTED_KEYWORDS:
            self.fail(f"unsupported construct {tok.text!r}")
        return self.advance()

    def split_shift(self):
        """Split a leading '>' off '>>'/'>>>' so nested generics close one level at a time."""
        tok = self.tok
        if tok.kind == "op" and tok.text in (">>", ">>>"):
            rest = Token("op", tok.text[1:], tok.offset + 1)
            self.tokens[self.pos : self.pos + 1] = [Token("op", ">", tok.offset), rest]

    # -- declarations --------------------------------------------------

    def method(self) -> AstNode:
        parts: list[AstNode] = []
        while True:
            if self.at("@") and not (self.peek().kind == "ident" and self.peek().text == "interface"):
                parts.append(self.annotation())
            elif self.tok.kind == "ident" and self.tok.text in MODIFIERS:
                parts.append(leaf("specifier", self.advance().text))
            else:
                break
        if self.at("<"):
            self.fail("generic method type parameters are not supported")
        if self.tok.kind == "ident" and self.peek().text == "(":
            kind = "constructor"
        else:
            kind = "function"
            parts.append(self.type_())
        parts.append(leaf("name", self.ident().text))
        parts.append(self.parameter_list())
        while self.at("["):
            self.advance()
            self.expect("]")
        if self.at("throws"):
            self.advance()
            thrown = [node("argument", node("expr", self.name_chain()))]
            while self.accept(","):
                thrown.append(node("argument", node("expr", self.name_chain())))
            parts.append(node("throws", *thrown))
        if not self.at("{"):
            self.fail("method has no body")
        parts.append(self.block())
        if self.tok.kind != "eof":
            self.fail(f"trailing input after method body: {self.tok.text!r}")
        return node("unit", node(kind, *parts))

    def annotation(self) -> AstNode:
        self.expect("@")
        children = [self.name_chain()]
        if self.at("("):
            children.append(self.argument_list())
        return node("annotation", *children)

    def name_chain(self) -> AstNode:
        """``a`` or ``a.b.c`` (srcML compound name)."""
        parts = [leaf("name", self.ident().text)]
        while self.at(".") and self.peek().kind == "ident":
            parts.append(leaf("operator", self.advance().text))
            parts.append(leaf("name", self.ident().text))
        return parts[0] if len(parts) == 1 else node("name", *parts)

    def type_name(self) -> AstNode:
        name = self.name_chain()
        extra: list[AstNode] = []
        if self.at("<"):
            extra.append(self.generic_arguments())
        while self.at("[") and self.peek().text == "]":
            self.advance()
            self.advance()
            extra.append(leaf("index"))
        if self.at("..."):
            extra.append(leaf("operator", self.advance().text))
        if not extra:
            return name
        parts = list(name.children) if name.children else [name]
        return node("name", *parts, *extra)

    def generic_arguments(self) -> AstNode:
        self.expect("<")
        args: list[AstNode] = []
        if not self.at(">"):
            while True:
                if self.at("?"):
                    parts = [leaf("operator", self.advance().text)]
                    if self.tok.kind == "ident" and self.tok.text in ("extends", "super"):
                        parts.append(leaf("specifier", self.advance().text))
                        parts.append(self.type_name())
                    args.append(node("argument", *parts))
                else:
                    args.append(node("argument", self.type_name()))
                self.split_shift()
                if not self.accept(","):
                    break
        self.split_shift()
        self.expect(">")
        return node("argument_list", *args)

    def type_(self) -> AstNode:
        parts = []
        while self.tok.kind == "ident" and self.tok.text == "final":
            parts.append(leaf("specifier", self.advance().text))
        while self.at("@"):
            parts.append(self.annotation())
        parts.append(self.type_name())
        return node("type", *parts)

    def parameter_list(self) -> AstNode:
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                params.append(self.parameter())
                if not self.accept(","):
                    break
        self.expect(")")
        return node("parameter_list", *params)

    def parameter(self) -> AstNode:
        type_node = self.type_()
        name = leaf("name", self.ident().text)
        while self.at("["):
            self.advance()
            self.expect("]")
        return node("parameter", node("decl", type_node, name))

    # -- statements ----------------------------------------------------

    def block(self) -> AstNode:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unterminated block")
            stmts.append(self.statement())
        self.advance()
        return node("block", *stmts)

    def statement(self) -> AstNode:
        tok = self.tok
        if tok.kind == "op":
            if tok.text == "{":
                return self.block()
            if tok.text == ";":
                self.advance()
                return leaf("empty_stmt")
        if tok.kind == "ident":
            handler = getattr(self, f"stmt_{tok.text}", None)
            if handler is not None and tok.text in STATEMENT_KEYWORDS:
                return handler()
            if tok.text in UNSUPPORTED_KEYWORDS:
                self.fail(f"unsupported construct {tok.text!r}")
            if tok.text == "synchronized" and self.peek().text == "(":
                self.fail("unsupported construct 'synchronized' block")
            if self.peek().text == ":" and tok.text not in MODIFIERS:
                self.fail("labeled statements are not supported")
            decl = self.try_local_declaration()
            if decl is not None:
                self.expect(";")
                return decl
        stmt = node("expr_stmt", self.expression())
        self.expect(";")
        return stmt

    def try_local_declaration(self) -> AstNode | None:
        start = self.pos
        try:
            type_node = self.type_()
            if self.tok.kind != "ident" or self.tok.text in STATEMENT_KEYWORDS:
                raise ParseError("not a declaration", self.tok.offset)
            if self.peek().text not in ("=", ";", ",", "[", ":"):
                raise ParseError("not a declaration", self.tok.offset)
        except ParseError:
            self.pos = start
            return None
        decls = [self.declarator(type_node)]
        while self.accept(","):
            decls.append(self.declarator(leaf("type")))
        return node("decl_stmt", *decls)

    def declarator(self, type_node: AstNode) -> AstNode:
        parts = [type_node, leaf("name", self.ident().text)]
        while self.at("["):
            self.advance()
            self.expect("]")
        if self.accept("="):
            if self.at("{"):
                self.fail("array initializers are not supported")
            parts.append(node("init", self.expression()))
        return node("decl", *parts)

    def stmt_return(self) -> AstNode:
        self.advance()
        if self.accept(";"):
            return leaf("return")
        expr = self.expression()
        self.expect(";")
        return node("return", expr)

    def condition(self) -> AstNode:
        self.expect("(")
        expr = self.expression()
        self.expect(")")
        return node("condition", expr)

    def stmt_if(self) -> AstNode:
        self.advance()
        parts = [self.condition(), node("then", self.statement())]
        if self.accept("else"):
            parts.append(node("else", self.statement()))
        return node("if", *parts)

    def stmt_while(self) -> AstNode:
        self.advance()
        return node("while", self.condition(), self.statement())

    def stmt_do(self) -> AstNode:
        self.advance()
        body = self.statement()
        self.expect("while")
        cond = self.condition()
        self.expect(";")
        return node("do", body, cond)

    def stmt_for(self) -> AstNode:
        self.advance()
        self.expect("(")
        init_parts: list[AstNode] = []
        decl = None
        if not self.at(";"):
            decl = self.try_local_declaration()
        if decl is not None and self.at(":"):
            self.advance()
            only = decl.children[0]
            only.children.append(node("range", self.expression()))
            self.expect(")")
            control = node("control", node("init", only))
            return node("for", control, self.statement())
        if decl is not None:
            init_parts.extend(decl.children)
        elif not self.at(";"):
            init_parts.append(self.expression())
            while self.accept(","):
                init_parts.append(self.expression())
        self.expect(";")
        cond = node("condition", self.expression()) if not self.at(";") else leaf("condition")
        self.expect(";")
        incr_parts = []
        if not self.at(")"):
            incr_parts.append(self.expression())
            while self.accept(","):
                incr_parts.append(self.expression())
        self.expect(")")
        control = node("control", node("init", *init_parts), cond, node("incr", *incr_parts))
        return node("for", control, self.statement())

    def stmt_try(self) -> AstNode:
        self.advance()
        if self.at("("):
            self.fail("try-with-resources is not supported")
        parts = [self.block()]
        while self.at("catch"):
            self.advance()
            self.expect("(")
            type_parts = []
            while self.tok.kind == "ident" and self.tok.text == "final":
                type_parts.append(leaf("specifier", self.advance().text))
            type_parts.append(self.type_name())
            while self.at("|"):
                type_parts.append(leaf("operator", self.advance().text))
                type_parts.append(self.type_name())
            name = leaf("name", self.ident().text)
            self.expect(")")
            params = node("parameter_list", node("parameter", node("decl", node("type", *type_parts), name)))
            parts.append(node("catch", params, self.block()))
        if self.accept("finally"):
            parts.append(node("finally", self.block()))
        if len(parts) == 1:
            self.fail("try without catch or finally")
        return node("try", *parts)

    def stmt_throw(self) -> AstNode:
        self.advance()
        expr = self.expression()
        self.expect(";")
        return node("throw", expr)

    def stmt_break(self) -> AstNode:
        self.advance()
        if self.tok.kind == "ident":
            self.fail("labeled break is not supported")
        self.expect(";")
        return leaf("break")

    def stmt_continue(self) -> AstNode:
        self.advance()
        if self.tok.kind == "ident":
            self.fail("labeled continue is not supported")
        self.expect(";")
        return leaf("continue")

    # -- expressions ---------------------------------------------------

    def expression(self) -> AstNode:
        items: list[AstNode] = []
        self.expression_items(items, depth=0)
        if not items:
            self.fail(f"expected expression, found {self.tok.text or 'end of input'!r}")
        return node("expr", *items)

    def expression_items(self, items: list[AstNode], depth: int):
        pending_ternary = 0
        while True:
            tok = self.tok
            if tok.kind == "eof":
                if depth:
                    self.fail("unterminated parenthesis")
                return
            if tok.kind == "op":
                if tok.text in (";", ",", "]", "}") or tok.text == ")":
                    return
                if tok.text == ":":
                    if not pending_ternary:
                        return
                    pending_ternary -= 1
                elif tok.text == "?":
                    pending_ternary += 1
                elif tok.text in ("->", "::"):
                    self.fail("lambdas and method references are not supported")
                elif tok.text == "{":
                    self.fail("unexpected '{' in expression")
                elif tok.text == "@":
                    self.fail("unexpected annotation in expression")
                if tok.text == "(":
                    self.advance()
                    self.expression_items(items, depth + 1)
                    self.expect(")")
                    if self.at("->"):
                        self.fail("lambdas and method references are not supported")
                    continue
                if tok.text == "[" and items:
                    self.attach_index(items)
                    continue
                items.append(leaf("operator", self.advance().text))
                continue
            if tok.kind in ("number", "string", "char"):
                items.append(leaf("literal", self.advance().text))
                continue
            # identifier-like
            if tok.text in LITERAL_WORDS:
                items.append(leaf("literal", self.advance().text))
            elif tok.text == "new":
                items.append(leaf("operator", self.advance().text))
                items.append(self.creation())
            elif tok.text == "instanceof":
                items.append(leaf("operator", self.advance().text))
                items.append(self.type_name())
            else:
                items.append(self.name_or_call())

    def attach_index(self, items: list[AstNode]):
        self.expect("[")
        idx = node("index", self.expression())
        self.expect("]")
        target = items[-1]
        if target.label == "name":
            parts = list(target.children) if target.children else [target]
            items[-1] = node("name", *parts, idx)
        else:
            items.append(idx)

    def name_or_call(self) -> AstNode:
        name = self.name_chain()
        if self.at("("):
            return node("call", name, self.argument_list())
        return name

    def creation(self) -> AstNode:
        name = self.type_name_without_arrays()
        if self.at("("):
            call = node("call", name, self.argument_list())
            if self.at("{"):
                self.fail("anonymous classes are not supported")
            return call
        if self.at("["):
            parts = list(name.children) if name.children else [name]
            while self.at("["):
                self.advance()
                if self.at("]"):
                    self.advance()
                    parts.append(leaf("index"))
                else:
                    parts.append(node("index", self.expression()))
                    self.expect("]")
            if self.at("{"):
                self.fail("array initializers are not supported")
            return node("name", *parts)
        self.fail("expected '(' or '[' after type in 'new' expression")

    def type_name_without_arrays(self) -> AstNode:
        name = self.name_chain()
        if self.at("<"):
            parts = list(name.children) if name.children else [name]
            return node("name", *parts, self.generic_arguments())
        return name

    def argument_list(self) -> AstNode:
        self.expect("(")
        args = []
        if not self.at(")"):
            while True:
                args.append(node("argument", self.expression()))
                if not self.accept(","):
                    break
        self.expect(")")
        return node("argument_list", *args)


def parse_method(source: str) -> AstNode:
    """Parse one Java method declaration into a ``unit`` rooted srcML-style tree.

    Raises :class:`ParseError` (with a byte offset) on unsupported syntax.
    """
    return _Parser(source).method()
