"""``predictions.tsv`` / ``references.tsv`` readers and evaluation writers."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

from .._io import atomic_open, write_json
from .compare import EvalReport

DELIMITERS = frozenset({"<s>", "</s>", "<NULL>"})


def read_summaries(path: str | Path) -> dict[str, list[str]]:
    """``method_id \\t space-separated summary`` lines; delimiter tokens are dropped."""
    out: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            key, _, text = line.partition("\t")
            if key in out:
                raise ValueError(f"{path}:{lineno}: duplicate method id {key}")
            out[key] = [t for t in text.split() if t not in DELIMITERS]
    return out


def write_summaries(path: str | Path, summaries: Mapping[object, Sequence[str]]):
    with atomic_open(path) as fh:
        for key in sorted(summaries, key=lambda k: (len(str(k)), str(k))):
            fh.write(f"{key}\t{' '.join(summaries[key])}\n")


def write_report(out_dir: str | Path, report: EvalReport, system: str = "model"):
    out_dir = Path(out_dir)
    write_json(out_dir / "eval.json", report.summary())
    with atomic_open(out_dir / "permethod.tsv") as fh:
        fh.write(f"id\t{system}\n")
        for key, score in report.sentence_scores.items():
            fh.write(f"{key}\t{score:.6f}\n")
