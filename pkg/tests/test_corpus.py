import hashlib

import numpy as np
import pytest
from conftest import EXAMPLE1
from hypothesis import given
from hypothesis import strategies as st

from codesum.corpus import (
    END,
    PAD,
    START,
    UNK_ID,
    CorpusConfig,
    MethodRecord,
    ProcessedExample,
    RecordRejected,
    Vocab,
    build_vocab,
    extract_methods,
    extract_summary,
    frame_sequence,
    is_autogenerated,
    is_english,
    load_dataset,
    partition_counts,
    prepare_corpus,
    process_record,
    read_java_tree,
    read_method_tsv,
    reinstate_unique_autogen,
    split_by_project,
    split_identifier,
    tokenize,
    write_dataset,
)
from codesum.synthetic import generate_methods, to_records


# -- text ----------------------------------------------------------------------


def test_extract_summary_first_sentence():
    doc = "/**\n * Sets the token URL. Used by the client.\n * @param tokenUrl the url\n */"
    assert extract_summary(doc) == "Sets the token URL"


def test_extract_summary_without_period_uses_first_line():
    assert extract_summary("/** Returns the value\n * more text */") == "Returns the value"


def test_extract_summary_skips_block_tags():
    assert extract_summary("/**\n * @return the count\n * Counts things.\n */") == "Counts things"


@pytest.mark.parametrize("raw", [None, "", "// sets the value", "/* sets the value */", "/** */"])
def test_extract_summary_rejects_non_javadoc(raw):
    assert extract_summary(raw) is None


def test_is_english():
    assert is_english("sets the token url")
    assert not is_english("définit l'url du jeton")
    assert not is_english("设置令牌网址")
    assert not is_english("")


def test_is_autogenerated_per_line():
    assert is_autogenerated("// Generated by the protocol buffer compiler.  DO NOT EDIT!\nclass A {}")
    assert not is_autogenerated("class A { // this was\n // generated\n }")
    assert is_autogenerated("x", phrases=["X"])


def test_split_identifier():
    assert split_identifier("getPlayerScore") == ["get", "Player", "Score"]
    assert split_identifier("parseHTTPResponse") == ["parse", "HTTP", "Response"]


def test_tokenize_example1():
    assert " ".join(tokenize(EXAMPLE1, "code")) == (
        "public config token url string token url this token url token url return this"
    )


def test_tokenize_drops_digits_underscores_and_comments():
    assert tokenize("token_url2") == ["token", "url"]
    assert tokenize("int a; // Hidden words\n /* more */ b", "code") == ["int", "a", "b"]


def test_tokenize_rejects_unknown_kind():
    with pytest.raises(ValueError):
        tokenize("x", "xml")


@given(st.text(max_size=80))
def test_tokenize_is_idempotent(text):
    once = tokenize(text)
    assert tokenize(" ".join(once)) == once
    assert all(t.isascii() and t.isalpha() and t.islower() for t in once)


# -- vocab ---------------------------------------------------------------------


def test_build_vocab_orders_by_frequency_then_word():
    v = build_vocab([["b", "a", "c", "a"], ["c", "d"]], max_size=6)
    assert v.itos == [PAD, "<UNK>", START, END, "a", "c"]
    assert v.index("zzz") == UNK_ID


def test_vocab_tsv_round_trip(tmp_path):
    v = build_vocab([["x", "y", "y"]], 100)
    v.save(tmp_path / "v.tsv")
    assert Vocab.load(tmp_path / "v.tsv") == v


def test_vocab_requires_reserved_prefix():
    with pytest.raises(ValueError):
        Vocab(["a", "b"])


def test_frame_sequence_pads_and_truncates():
    v = build_vocab([["a", "b"]], 10)
    assert frame_sequence([START, "a", "b", END], 6, v).tolist() == [2, 4, 5, 3, 0, 0]
    assert frame_sequence([START, "a", "b", END], 2, v).tolist() == [2, 4]
    assert frame_sequence(["q"], 2, v).tolist() == [UNK_ID, 0]


# -- records -------------------------------------------------------------------


def _record(i=1, doc="/** Sets the token url. */", src=EXAMPLE1, project="p", text=None):
    return MethodRecord(i, project, text or src, src, doc)


def test_process_example1():
    ex = process_record(_record(), CorpusConfig())
    assert ex.code_tokens[0] == START and ex.code_tokens[-1] == END
    assert ex.comment_tokens == [START, "sets", "the", "token", "url", END]
    assert ex.ast_tokens[:2] == ["(", "unit"]


@pytest.mark.parametrize(
    "doc, src, reason",
    [
        ("// sets the value", EXAMPLE1, "no_javadoc"),
        ("/** Définit l'url du jeton. */", EXAMPLE1, "non_english"),
        ("/** TODO: the thing. */", EXAMPLE1, "artifact"),
        ("/** {@inheritDoc} for the base. */", EXAMPLE1, "artifact"),
        ("/** The. */", EXAMPLE1, "too_short"),
        ("/** Runs the task. */", "void f() { x -> y; }", "parse_error"),
    ],
)
def test_process_record_rejections(doc, src, reason):
    with pytest.raises(RecordRejected) as info:
        process_record(_record(doc=doc, src=src), CorpusConfig())
    assert info.value.reason == reason


def test_comment_truncated_to_comlen():
    doc = "/** " + " ".join(["the word"] * 20) + ". */"
    ex = process_record(_record(doc=doc), CorpusConfig(comlen=13))
    assert len(ex.comment_tokens) == 13 and ex.comment_tokens[-1] != END


def test_extract_methods_from_file():
    text = (
        "package p;\nclass A {\n  /** Sets the value. */\n  public void setX(int x) { this.x = x; }\n"
        "  int y = 2;\n  /** Gets it. */\n  int getY() { if (y > 0) { return y; } return 0; }\n}\n"
    )
    methods = extract_methods(text)
    assert [m[1] for m in methods] == ["/** Sets the value. */", "/** Gets it. */"]
    assert methods[1][0].startswith("int getY()") and methods[1][0].endswith("}")


def test_read_java_tree(tmp_path):
    (tmp_path / "proj" / "src").mkdir(parents=True)
    (tmp_path / "proj" / "src" / "A.java").write_text(
        "class A {\n/** Sets the url. */\npublic void setUrl(String u) { url = u; }\n}\n"
    )
    records = read_java_tree(tmp_path)
    assert len(records) == 1 and records[0].project_id == "proj"


def test_read_method_tsv(tmp_path):
    path = tmp_path / "m.tsv"
    path.write_text('id\tproject\tsource\tdoc\n7\tp1\t"void f() {}"\t"/** Does the thing. */"\n')
    rec = read_method_tsv(path)[0]
    assert (rec.id, rec.project_id, rec.method_source) == (7, "p1", "void f() {}")


# -- splits --------------------------------------------------------------------


def _examples(n_projects, per_project=3, train_only_every=0):
    out = []
    for p in range(n_projects):
        for k in range(per_project):
            i = p * per_project + k
            out.append(
                ProcessedExample(
                    i, f"proj{p}", [START, f"w{i}", END], [], [], [START, "sets", "the", "value", END],
                    train_only=bool(train_only_every) and i % train_only_every == 0,
                )
            )
    return out


def test_partition_counts():
    assert partition_counts(100, (0.9, 0.05, 0.05)) == (90, 5, 5)
    assert partition_counts(3, (0.9, 0.05, 0.05)) == (1, 1, 1)
    with pytest.raises(ValueError):
        partition_counts(2, (0.9, 0.05, 0.05))


@pytest.mark.parametrize("seed", range(100))
def test_project_disjoint_splits(seed):
    split = split_by_project(_examples(40, train_only_every=4), (0.8, 0.1, 0.1), seed)
    train, valid, test = (split.projects(s) for s in ("train", "validation", "test"))
    assert not (train & valid) and not (train & test) and not (valid & test)
    assert all(not ex.train_only for ex in split.validation + split.test)


def test_split_counts_dropped_train_only():
    data = _examples(20, train_only_every=2)
    split = split_by_project(data, (0.8, 0.1, 0.1), seed=3)
    kept = len(split.train) + len(split.validation) + len(split.test)
    assert kept + split.dropped_train_only == len(data)


def test_split_needs_three_projects():
    with pytest.raises(ValueError):
        split_by_project(_examples(2), seed=0)


def test_reinstate_keeps_lowest_id_per_pair():
    a = ProcessedExample(5, "p", ["x"], [], [], ["c"])
    b = ProcessedExample(2, "q", ["x"], [], [], ["c"])
    c = ProcessedExample(9, "p", ["y"], [], [], ["c"])
    out = reinstate_unique_autogen([a, b, c])
    assert [e.id for e in out] == [2, 9] and all(e.train_only for e in out)


def _synthetic_records(n=90, seed=4):
    records = to_records(generate_methods(n, seed=seed, structural_summaries=False), n_projects=9, seed=seed)
    for r in records[::10]:
        r.file_text = "// Auto-generated code, do not edit\n" + r.file_text
    return records


def test_prepare_corpus_reinstated_only_in_train():
    split, stats = prepare_corpus(_synthetic_records(), CorpusConfig(ratios=(0.6, 0.2, 0.2)), seed=1)
    assert stats["autogen_removed"] == 9
    assert stats["autogen_reinstated"] == 9
    assert all(not e.train_only for e in split.validation + split.test)
    assert stats["autogen_reinstated"] - stats["reinstated_dropped"] == sum(e.train_only for e in split.train)


def _digest(directory):
    h = hashlib.sha256()
    for path in sorted(directory.iterdir()):
        h.update(path.name.encode() + path.read_bytes())
    return h.hexdigest()


def test_dataset_files_are_byte_identical_across_runs(tmp_path):
    caps = {"txt": 500, "ast": 100, "sbt": 500, "com": 100}
    for run in ("a", "b"):
        split, stats = prepare_corpus(_synthetic_records(), CorpusConfig(ratios=(0.6, 0.2, 0.2)), seed=11)
        write_dataset(tmp_path / run, split, caps, stats)
    assert _digest(tmp_path / "a") == _digest(tmp_path / "b")


def test_dataset_round_trip(tmp_path):
    caps = {"txt": 500, "ast": 100, "sbt": 500, "com": 100}
    split, _ = prepare_corpus(_synthetic_records(), CorpusConfig(ratios=(0.6, 0.2, 0.2)), seed=0)
    vocabs = write_dataset(tmp_path, split, caps)
    splits, loaded = load_dataset(tmp_path)
    assert loaded == vocabs
    assert [e.id for e in splits["test"]] == [e.id for e in split.test]
    assert splits["train"][0].ast_tokens == split.train[0].ast_tokens
    # vocabularies come from the training split only
    test_only = {w for e in split.test for w in e.comment_tokens} - {
        w for e in split.train for w in e.comment_tokens
    }
    assert not any(w in vocabs["com"] for w in test_only)


def test_different_seeds_give_different_splits():
    data = _examples(30)
    a = split_by_project(data, (0.8, 0.1, 0.1), 0).projects("test")
    b = split_by_project(data, (0.8, 0.1, 0.1), 1).projects("test")
    assert a != b
    assert np.all([isinstance(p, str) for p in a])
