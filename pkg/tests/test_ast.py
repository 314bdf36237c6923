import pytest
from conftest import EXAMPLE1, EXAMPLE1_SBTAO
from hypothesis import given
from hypothesis import strategies as st

from codesum.ast import (
    LABELS,
    WORD_LABELS,
    ApiWhitelist,
    AstNode,
    ParseError,
    SrcmlError,
    check_balanced,
    from_xml,
    leaf,
    node,
    parse_method,
    sbt_ao_flatten,
    sbt_flatten,
    sbt_unflatten,
    to_xml,
)

STRUCT_LABELS = sorted(LABELS - WORD_LABELS)
words = st.text(alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.", min_size=1, max_size=8)


def trees(max_leaves=30):
    word_leaf = st.builds(AstNode, st.sampled_from(sorted(WORD_LABELS)), words)
    bare_leaf = st.builds(AstNode, st.sampled_from(STRUCT_LABELS))
    return st.recursive(
        word_leaf | bare_leaf,
        lambda kids: st.builds(
            lambda label, children: AstNode(label, None, children),
            st.sampled_from(STRUCT_LABELS),
            st.lists(kids, min_size=1, max_size=4),
        ),
        max_leaves=max_leaves,
    )


def test_request_remove_sbt():
    tree = node(
        "MethodInvocation",
        leaf("SimpleName", "request"),
        leaf("SimpleName", "remove"),
        leaf("SimpleName", "id"),
    )
    assert " ".join(sbt_flatten(tree)) == (
        "( MethodInvocation ( SimpleName_request ) SimpleName_request "
        "( SimpleName_remove ) SimpleName_remove ( SimpleName_id ) SimpleName_id ) MethodInvocation"
    )


def test_example1_sbtao_listing():
    tree = parse_method(EXAMPLE1)
    assert " ".join(sbt_ao_flatten(tree, {"String"})) == EXAMPLE1_SBTAO


def test_default_whitelist_keeps_string():
    tree = parse_method(EXAMPLE1)
    assert "String" in ApiWhitelist.default()
    assert sbt_ao_flatten(tree, ApiWhitelist.default()) == EXAMPLE1_SBTAO.split()


def test_whitelist_is_case_sensitive():
    assert "string" not in ApiWhitelist(frozenset({"String"}))


def test_minimal_method_shape():
    assert str(parse_method("void f(){}")) == "unit(function(type(name:void), name:f, parameter_list, block))"


def test_empty_block_flattens_to_leaf_pair():
    tokens = sbt_flatten(parse_method("void f(){}"))
    assert tokens[-8:] == ["(", "block", ")", "block", ")", "function", ")", "unit"]


@pytest.mark.parametrize(
    "source, needle",
    [
        ("void f() { Runnable r = new Runnable() { public void run() {} }; }", "{ public"),
        ("void f() { list.forEach(x -> g(x)); }", "->"),
        ("void f() { switch (x) { case 1: break; } }", "switch"),
    ],
)
def test_unsupported_constructs_report_offset(source, needle):
    with pytest.raises(ParseError) as info:
        parse_method(source)
    offset = info.value.offset
    assert 0 <= offset <= len(source.encode())
    assert source.encode().find(needle.encode()) <= offset + len(needle)


def test_offset_counts_bytes_not_chars():
    source = 'void f() { String s = "é"; g(x -> y); }'
    with pytest.raises(ParseError) as info:
        parse_method(source)
    assert info.value.offset == source.encode().index(b"->")
    assert info.value.offset == source.index("->") + 1


def test_parser_never_emits_unlisted_labels():
    sources = [
        EXAMPLE1,
        "public static int sum(int[] xs) { int t = 0; for (int x : xs) { t += x; } return t; }",
        "protected void run() throws IOException { try { a.b(); } catch (IOException | RuntimeException e) "
        "{ throw e; } finally { close(); } }",
        "int g(int n) { int i = 0, j; while (i < n) { i++; if (i > 3) break; else continue; } "
        "do { j = i--; } while (j > 0); return n > 0 ? n : -n; }",
        "@Override public void h() {}",
        "public List<Map<String, Integer>> m(String... args) { return new ArrayList<>(); }",
    ]
    for src in sources:
        tree = parse_method(src)
        assert {n.label for n in tree.walk()} <= LABELS
        assert tree.label == "unit" and [c.label for c in tree.children] == ["function"]


def test_constructor_has_no_type():
    tree = parse_method("public Config(String url) { this.url = url; }")
    assert tree.children[0].label == "constructor"


def test_word_nodes_are_leaves():
    with pytest.raises(ValueError):
        AstNode("name", "x", [AstNode("block")])


def test_from_xml_leaf_and_nesting():
    assert from_xml("<name>id</name>") == AstNode("name", "id")
    tree = from_xml("<expr_stmt><expr><name>a</name></expr></expr_stmt>")
    assert tree.label == "expr_stmt" and tree.children[0].label == "expr"
    assert tree.children[0].children[0].word == "a"


def test_from_xml_rejects_unknown_element():
    with pytest.raises(SrcmlError, match="blob"):
        from_xml("<expr><blob/></expr>")


def test_from_xml_rejects_malformed():
    with pytest.raises(SrcmlError):
        from_xml("<expr><name>a</expr>")


def test_from_xml_handles_namespace():
    xml = '<unit xmlns="http://www.srcML.org/srcML/src"><function><name>f</name></function></unit>'
    assert str(from_xml(xml)) == "unit(function(name:f))"


def test_xml_round_trip_example1():
    tree = parse_method(EXAMPLE1)
    assert from_xml(to_xml(tree)) == tree


@given(trees())
def test_sbt_is_balanced_and_four_tokens_per_node(tree):
    for tokens in (sbt_flatten(tree), sbt_ao_flatten(tree, {"String"})):
        assert check_balanced(tokens)
        assert len(tokens) == 4 * tree.size()
        assert tokens.count("(") == tokens.count(")") == tree.size()


@given(trees(max_leaves=60))
def test_unflatten_inverts_sbt(tree):
    assert sbt_unflatten(sbt_flatten(tree)) == tree


def test_unflatten_round_trip_1000_seeded_trees():
    import random

    rng = random.Random(1234)

    def make(depth):
        if depth == 0 or rng.random() < 0.3:
            if rng.random() < 0.5:
                return AstNode(rng.choice(sorted(WORD_LABELS)), f"w{rng.randrange(1000)}")
            return AstNode(rng.choice(STRUCT_LABELS))
        return AstNode(rng.choice(STRUCT_LABELS), None, [make(depth - 1) for _ in range(rng.randint(1, 4))])

    for _ in range(1000):
        tree = make(rng.randint(0, 6))
        assert sbt_unflatten(sbt_flatten(tree)) == tree


def test_check_balanced_detects_errors():
    assert not check_balanced(["(", "expr", ")", "block"])
    assert not check_balanced(["(", "expr"])
    assert not check_balanced([")", "expr"])


def test_literal_whitespace_is_folded():
    tree = parse_method('void f() { g("a b"); }')
    assert all(" " not in t for t in sbt_flatten(tree))
