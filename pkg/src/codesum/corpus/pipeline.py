"""From raw (method, JavaDoc) pairs to project-disjoint, framed datasets."""

from __future__ import annotations

import csv
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .._io import atomic_open, write_json
from ..ast import ApiWhitelist, ParseError, parse_method, sbt_ao_flatten, sbt_flatten
from .text import extract_summary, is_autogenerated, is_english, tokenize
from .vocab import END, START, Vocab, build_vocab

log = logging.getLogger(__name__)

SPLITS = ("train", "valid", "test")
DATASET_COLUMNS = ("id", "project_id", "code_tokens", "sbt_tokens", "sbtao_tokens", "comment_tokens")
ARTIFACT_WORDS = frozenset({"todo", "fixme", "xxx", "inheritdoc"})


@dataclass
class MethodRecord:
    id: int
    project_id: str
    file_text: str
    method_source: str
    javadoc_raw: str = ""

    def __post_init__(self):
        if not self.project_id:
            raise ValueError(f"record {self.id} has an empty project_id")


@dataclass
class ProcessedExample:
    id: int
    project_id: str
    code_tokens: list[str]
    ast_tokens: list[str]
    sbt_tokens: list[str]
    comment_tokens: list[str]
    train_only: bool = False


@dataclass
class SplitCorpus:
    train: list[ProcessedExample]
    validation: list[ProcessedExample]
    test: list[ProcessedExample]
    seed: int
    dropped_train_only: int = 0

    def projects(self, split: str) -> set[str]:
        return {ex.project_id for ex in getattr(self, split)}

    def parts(self) -> dict[str, list[ProcessedExample]]:
        return {"train": self.train, "valid": self.validation, "test": self.test}


@dataclass
class CorpusConfig:
    txtlen: int = 100
    astlen: int = 100
    sbtlen: int = 100
    comlen: int = 13
    min_comment_tokens: int = 2
    min_stopword_hits: int = 1
    min_ascii_letter_ratio: float = 0.8
    ratios: tuple[float, float, float] = (0.90, 0.05, 0.05)
    autogen_phrases: tuple[str, ...] | None = None
    whitelist: ApiWhitelist = field(default_factory=ApiWhitelist.default)


class RecordRejected(Exception):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


def _delimit(tokens: Sequence[str], limit: int) -> list[str]:
    return ([START, *tokens, END])[:limit]


def process_record(record: MethodRecord, config: CorpusConfig) -> ProcessedExample:
    """Apply every per-record filter and build all token views of one method.

    Raises :class:`RecordRejected` naming the filter that dropped the record.
    """
    summary = extract_summary(record.javadoc_raw)
    if summary is None:
        raise RecordRejected("no_javadoc")
    if not is_english(
        summary,
        min_stopword_hits=config.min_stopword_hits,
        min_ascii_letter_ratio=config.min_ascii_letter_ratio,
    ):
        raise RecordRejected("non_english")
    first = summary.split()[0]
    if not first[0].isascii() or not first[0].isalpha() or first.lower().strip(".,:;") in ARTIFACT_WORDS:
        raise RecordRejected("artifact")
    comment = tokenize(summary, "comment")
    if len(comment) < config.min_comment_tokens:
        raise RecordRejected("too_short")
    try:
        tree = parse_method(record.method_source)
    except ParseError as exc:
        raise RecordRejected("parse_error", str(exc)) from exc
    return ProcessedExample(
        id=record.id,
        project_id=record.project_id,
        code_tokens=_delimit(tokenize(record.method_source, "code"), config.txtlen),
        ast_tokens=sbt_ao_flatten(tree, config.whitelist)[: config.astlen],
        sbt_tokens=sbt_flatten(tree)[: config.sbtlen],
        comment_tokens=_delimit(comment, config.comlen),
    )


def reinstate_unique_autogen(removed: Iterable[ProcessedExample]) -> list[ProcessedExample]:
    """One train-only representative (lowest id) per distinct (code, comment) pair."""
    seen: dict[tuple, ProcessedExample] = {}
    for ex in sorted(removed, key=lambda e: e.id):
        key = (tuple(ex.code_tokens), tuple(ex.comment_tokens))
        if key not in seen:
            seen[key] = ex
    out = []
    for ex in seen.values():
        out.append(
            ProcessedExample(
                ex.id, ex.project_id, list(ex.code_tokens), list(ex.ast_tokens),
                list(ex.sbt_tokens), list(ex.comment_tokens), train_only=True,
            )
        )
    return out


def partition_counts(n_projects: int, ratios: Sequence[float]) -> tuple[int, int, int]:
    n_valid = max(1, int(round(n_projects * ratios[1])))
    n_test = max(1, int(round(n_projects * ratios[2])))
    n_train = n_projects - n_valid - n_test
    if n_train < 1:
        raise ValueError(f"{n_projects} projects cannot be split with ratios {tuple(ratios)}")
    return n_train, n_valid, n_test


def split_by_project(
    records: Sequence[ProcessedExample],
    ratios: Sequence[float] = (0.90, 0.05, 0.05),
    seed: int = 0,
) -> SplitCorpus:
    """Shuffle projects with a seeded RNG and cut them by ``ratios``.

    Train-only records never leave the training set; those whose project
    was drawn into validation or test are dropped (counted), so the three
    project sets stay disjoint.
    """
    if abs(sum(ratios) - 1.0) > 1e-9 or any(r <= 0 for r in ratios):
        raise ValueError(f"ratios must be positive and sum to 1, got {tuple(ratios)}")
    regular = sorted((r for r in records if not r.train_only), key=lambda r: r.id)
    extra = sorted((r for r in records if r.train_only), key=lambda r: r.id)
    projects = sorted({r.project_id for r in regular})
    if len(projects) < 3:
        raise ValueError(f"need at least 3 projects to split, got {len(projects)}")
    n_train, n_valid, _ = partition_counts(len(projects), ratios)
    order = np.random.default_rng(seed).permutation(len(projects))
    shuffled = [projects[i] for i in order]
    group = {}
    for i, p in enumerate(shuffled):
        group[p] = "train" if i < n_train else "valid" if i < n_train + n_valid else "test"
    parts: dict[str, list[ProcessedExample]] = {"train": [], "valid": [], "test": []}
    for r in regular:
        parts[group[r.project_id]].append(r)
    dropped = 0
    for r in extra:
        if group.get(r.project_id, "train") == "train":
            parts["train"].append(r)
        else:
            dropped += 1
    parts["train"].sort(key=lambda r: r.id)
    return SplitCorpus(parts["train"], parts["valid"], parts["test"], seed, dropped)


def prepare_corpus(
    records: Iterable[MethodRecord], config: CorpusConfig | None = None, seed: int = 0
) -> tuple[SplitCorpus, dict[str, int]]:
    """Run the whole preparation: filters, auto-generated handling, split."""
    config = config or CorpusConfig()
    stats: Counter[str] = Counter()
    kept: list[ProcessedExample] = []
    autogen: list[ProcessedExample] = []
    autogen_cache: dict[str, bool] = {}
    for rec in sorted(records, key=lambda r: r.id):
        stats["total"] += 1
        try:
            ex = process_record(rec, config)
        except RecordRejected as exc:
            stats[f"rejected_{exc.reason}"] += 1
            continue
        text = rec.file_text
        if text not in autogen_cache:
            autogen_cache[text] = is_autogenerated(text, config.autogen_phrases)
        if autogen_cache[text]:
            autogen.append(ex)
        else:
            kept.append(ex)
    reinstated = reinstate_unique_autogen(autogen)
    stats["autogen_removed"] = len(autogen)
    stats["autogen_reinstated"] = len(reinstated)
    split = split_by_project(kept + reinstated, config.ratios, seed)
    stats["reinstated_dropped"] = split.dropped_train_only
    stats["kept"] = len(kept)
    for name, part in split.parts().items():
        stats[f"split_{name}"] = len(part)
    return split, dict(sorted(stats.items()))


# -- raw corpus readers ------------------------------------------------------

_JAVADOC = re.compile(r"/\*\*.*?\*/", re.DOTALL)


def _skip_to_body_end(text: str, start: int) -> int | None:
    """Index just past the brace closing the block opening at ``start``."""
    depth = 0
    i = start
    n = len(text)
    while i < n:
        c = text[i]
        if c in "\"'":
            i += 1
            while i < n and text[i] != c:
                i += 2 if text[i] == "\\" else 1
        elif text.startswith("//", i):
            i = text.find("\n", i)
            if i < 0:
                return None
        elif text.startswith("/*", i):
            i = text.find("*/", i + 2)
            if i < 0:
                return None
            i += 1
        elif c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return None


_NOT_METHOD = re.compile(r"\b(class|interface|enum|record)\b|=")


def extract_methods(file_text: str) -> list[tuple[str, str]]:
    """``(method_source, javadoc)`` for every JavaDoc-commented method with a body."""
    out = []
    for m in _JAVADOC.finditer(file_text):
        header_start = m.end()
        brace = semi = None
        paren = 0
        i = header_start
        while i < len(file_text):
            c = file_text[i]
            if c == "(":
                paren += 1
            elif c == ")":
                paren -= 1
            elif paren == 0 and c == "{":
                brace = i
                break
            elif paren == 0 and c == ";":
                semi = i
                break
            elif file_text.startswith("/**", i):
                break
            i += 1
        if brace is None or semi is not None:
            continue
        header = file_text[header_start:brace]
        if "(" not in header or _NOT_METHOD.search(header.split("(", 1)[0]):
            continue
        end = _skip_to_body_end(file_text, brace)
        if end is None:
            continue
        out.append((file_text[header_start:end].strip(), m.group()))
    return out


def read_java_tree(root: str | Path) -> list[MethodRecord]:
    """Methods from ``root/<project>/**/*.java``; ids follow sorted path order."""
    root = Path(root)
    records = []
    for path in sorted(root.rglob("*.java")):
        rel = path.relative_to(root)
        if len(rel.parts) < 2:
            log.warning("skipping %s: not inside a project directory", path)
            continue
        text = path.read_text(encoding="utf-8", errors="replace")
        for source, doc in extract_methods(text):
            records.append(MethodRecord(len(records), rel.parts[0], text, source, doc))
    return records


def read_method_tsv(path: str | Path) -> list[MethodRecord]:
    """TSV of ``id, project_id, method_source, javadoc[, file_text]`` (csv quoting).

    Without a file_text column the method source stands in for its file.
    """
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh, delimiter="\t"):
            if not row or (not records and row[0] == "id"):
                continue
            if len(row) not in (4, 5):
                raise ValueError(f"{path}: expected 4 or 5 columns, got {len(row)}")
            file_text = row[4] if len(row) == 5 else row[2]
            records.append(MethodRecord(int(row[0]), row[1], file_text, row[2], row[3]))
    return records


# -- dataset files -----------------------------------------------------------


def write_split(path: str | Path, examples: Sequence[ProcessedExample]):
    with atomic_open(path) as fh:
        fh.write("\t".join(DATASET_COLUMNS) + "\n")
        for ex in examples:
            cols = [
                str(ex.id), ex.project_id, " ".join(ex.code_tokens), " ".join(ex.sbt_tokens),
                " ".join(ex.ast_tokens), " ".join(ex.comment_tokens),
            ]
            fh.write("\t".join(cols) + "\n")


def read_split(path: str | Path) -> list[ProcessedExample]:
    out = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if tuple(header) != DATASET_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        for line in fh:
            cols = line.rstrip("\n").split("\t")
            ident, project, code, sbt, ast, com = cols
            out.append(
                ProcessedExample(int(ident), project, code.split(), ast.split(), sbt.split(), com.split())
            )
    return out


VOCAB_FILES = {"txt": "vocab.txt.tsv", "ast": "vocab.ast.tsv", "sbt": "vocab.sbt.tsv", "com": "vocab.com.tsv"}


def build_vocabs(train: Sequence[ProcessedExample], caps: dict[str, int]) -> dict[str, Vocab]:
    views = {
        "txt": [e.code_tokens for e in train],
        "ast": [e.ast_tokens for e in train],
        "sbt": [e.sbt_tokens for e in train],
        "com": [e.comment_tokens for e in train],
    }
    return {k: build_vocab(v, caps[k]) for k, v in views.items()}


def write_dataset(
    out_dir: str | Path, split: SplitCorpus, caps: dict[str, int], stats: dict | None = None
) -> dict[str, Vocab]:
    """Write the three split files and the train-only vocabularies."""
    out_dir = Path(out_dir)
    for name, part in split.parts().items():
        write_split(out_dir / f"{name}.tsv", part)
    vocabs = build_vocabs(split.train, caps)
    for key, vocab in vocabs.items():
        with atomic_open(out_dir / VOCAB_FILES[key]) as fh:
            fh.write(vocab.to_tsv())
    if stats is not None:
        write_json(out_dir / "stats.json", stats)
    return vocabs


def load_dataset(data_dir: str | Path) -> tuple[dict[str, list[ProcessedExample]], dict[str, Vocab]]:
    data_dir = Path(data_dir)
    splits = {name: read_split(data_dir / f"{name}.tsv") for name in SPLITS}
    vocabs = {k: Vocab.load(data_dir / f) for k, f in VOCAB_FILES.items()}
    return splits, vocabs
