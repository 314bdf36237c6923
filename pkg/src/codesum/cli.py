"""Command line: ``codesum prep|train|predict|eval|ensemble|attention``.

Settings resolve as defaults < ``--config`` JSON file < ``CODESUM_*``
environment variables < command-line flags. Every command writes the fully
resolved settings to ``run.json`` in its output directory. Files are written
under temporary names and renamed when complete; progress goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._io import atomic_open, write_json
from .ast import ApiWhitelist
from .corpus import (
    SPLITS,
    CorpusConfig,
    load_dataset,
    prepare_corpus,
    read_java_tree,
    read_method_tsv,
    write_dataset,
)
from .infer import (
    VIEWS,
    encode_examples,
    ensemble_decode,
    greedy_decode,
    greedy_decode_with_attention,
    indices_to_words,
    lengths_for,
    sources_for,
    train,
)
from .metrics import evaluate, orthogonality, read_summaries, write_report, write_summaries
from .metrics.bleu import SMOOTHING_MODES
from .models import KINDS, ModelConfig, init_model, load_checkpoint, save_checkpoint
from .nn import Adam

log = logging.getLogger("codesum")

ENV_PREFIX = "CODESUM_"
SBT_MODES = ("sbt-ao", "sbt")
_SBT_MODE_VIEW = {"sbt-ao": "sbtao", "sbt": "sbt"}

DEFAULTS = {
    "seed": 0,
    "kind": "ast-attendgru",
    "challenge": False,
    "epochs": 10,
    "batch_size": 200,
    "lr": 1e-3,
    "embdims": 100,
    "rnndims": 256,
    "txtlen": 100,
    "astlen": 100,
    "comlen": 13,
    "txtvocab": 20000,
    "astvocab": 2000,
    "sbtvocab": 20000,
    "comvocab": 10000,
    "ratios": [0.90, 0.05, 0.05],
    "metric": "bleu",
    "valid_cap": 2000,
    "smoothing": "none",
    "sbt_mode": "sbt-ao",
    "whitelist": None,
    "split": "test",
}

_TYPES = {k: type(v) for k, v in DEFAULTS.items() if v is not None and not isinstance(v, list)}


class CliError(Exception):
    pass


def _coerce(key: str, value):
    if key == "ratios":
        if isinstance(value, str):
            value = value.split(",")
        return [float(v) for v in value]
    typ = _TYPES.get(key)
    if typ is bool:
        if isinstance(value, str):
            low = value.strip().lower()
            if low not in ("1", "0", "true", "false", "yes", "no"):
                raise CliError(f"{key}: expected a boolean, got {value!r}")
            return low in ("1", "true", "yes")
        return bool(value)
    if typ is None or value is None:
        return value
    try:
        return typ(value)
    except (TypeError, ValueError) as exc:
        raise CliError(f"{key}: cannot interpret {value!r} as {typ.__name__}") from exc


def resolve_settings(args: argparse.Namespace, environ=None) -> dict:
    """Merge defaults, the ``--config`` file, environment and flags."""
    environ = os.environ if environ is None else environ
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config file {args.config}: {exc}") from exc
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise CliError(f"unknown keys in {args.config}: {sorted(unknown)}")
        settings.update({k: _coerce(k, v) for k, v in loaded.items()})
    for key in DEFAULTS:
        env_key = ENV_PREFIX + key.upper()
        if env_key in environ:
            settings[key] = _coerce(key, environ[env_key])
    for key, value in vars(args).items():
        if key in DEFAULTS and value is not None:
            settings[key] = _coerce(key, value)
    _validate(settings)
    return settings


def _validate(s: dict):
    if s["kind"] not in KINDS:
        raise CliError(f"kind must be one of {KINDS}, got {s['kind']!r}")
    if s["sbt_mode"] not in SBT_MODES:
        raise CliError(f"sbt_mode must be one of {SBT_MODES}, got {s['sbt_mode']!r}")
    if s["smoothing"] not in SMOOTHING_MODES:
        raise CliError(f"smoothing must be one of {SMOOTHING_MODES}, got {s['smoothing']!r}")
    if s["split"] not in SPLITS:
        raise CliError(f"split must be one of {SPLITS}, got {s['split']!r}")
    for key in ("epochs", "batch_size", "embdims", "rnndims", "txtlen", "astlen", "comlen",
                "txtvocab", "astvocab", "sbtvocab", "comvocab", "valid_cap"):
        if s[key] <= 0:
            raise CliError(f"{key} must be positive, got {s[key]}")
    if s["challenge"] and s["kind"] != "attendgru":
        s["kind"] = "attendgru"


def _record_run(out_dir: Path, command: str, settings: dict, paths: dict, models=None):
    record = {"command": command, "version": __version__, "settings": settings,
              "paths": {k: str(v) for k, v in paths.items() if v is not None}}
    if models:
        # architecture comes from the checkpoints, not from the settings
        record["models"] = [m.config.to_dict() for m in models]
    write_json(out_dir / "run.json", record)


def _whitelist(settings: dict) -> ApiWhitelist:
    path = settings["whitelist"]
    return ApiWhitelist.from_file(path) if path else ApiWhitelist.default()


# -- commands ----------------------------------------------------------------


def cmd_prep(args, s: dict) -> int:
    if bool(args.corpus) == bool(args.methods):
        raise CliError("prep needs exactly one of --corpus DIR or --methods FILE")
    records = read_java_tree(args.corpus) if args.corpus else read_method_tsv(args.methods)
    if not records:
        raise CliError("no methods found in the input corpus")
    config = CorpusConfig(
        txtlen=s["txtlen"], astlen=s["astlen"], sbtlen=s["txtlen"], comlen=s["comlen"],
        ratios=tuple(s["ratios"]), whitelist=_whitelist(s),
    )
    split, stats = prepare_corpus(records, config, seed=s["seed"])
    caps = {"txt": s["txtvocab"], "ast": s["astvocab"], "sbt": s["sbtvocab"], "com": s["comvocab"]}
    out = Path(args.out)
    write_dataset(out, split, caps, stats)
    _record_run(out, "prep", s, {"corpus": args.corpus, "methods": args.methods, "out": out})
    for key, value in stats.items():
        print(f"{key}\t{value}", file=sys.stderr)
    return 0


def _model_config(s: dict, vocabs) -> ModelConfig:
    txt_view = "sbtao" if s["challenge"] else ("sbt" if s["kind"] == "sbt" else "code")
    ast_view = _SBT_MODE_VIEW[s["sbt_mode"]]
    return ModelConfig(
        kind=s["kind"], txtlen=s["txtlen"], astlen=s["astlen"], comlen=s["comlen"],
        embdims=s["embdims"], rnndims=s["rnndims"],
        txtvocabsize=len(vocabs[VIEWS[txt_view][1]]),
        astvocabsize=len(vocabs[VIEWS[ast_view][1]]),
        comvocabsize=len(vocabs["com"]), txt_view=txt_view, ast_view=ast_view,
    )


def _encode(model_config: ModelConfig, examples, vocabs):
    return encode_examples(examples, sources_for(model_config), vocabs, lengths_for(model_config))


def cmd_train(args, s: dict) -> int:
    splits, vocabs = load_dataset(args.data)
    config = _model_config(s, vocabs)
    model = init_model(config, seed=s["seed"])
    out = Path(args.out)
    log.info("training %s (%d parameters) on %d methods", config.kind,
             model.params.n_parameters(), len(splits["train"]))
    report = train(
        model,
        _encode(config, splits["train"], vocabs),
        _encode(config, splits["valid"], vocabs) if splits["valid"] else None,
        vocabs["com"],
        epochs=s["epochs"],
        batch_size=s["batch_size"],
        seed=s["seed"],
        optimizer=Adam(lr=s["lr"]),
        checkpoint_dir=out / "checkpoints",
        valid_cap=s["valid_cap"],
        metric=s["metric"],
    )
    save_checkpoint(model, out / "model.ckpt")
    write_json(out / "report.json", report.to_dict())
    _record_run(out, "train", s, {"data": args.data, "out": out}, [model])
    print(f"selected epoch {report.selected_epoch} ({report.metric} "
          f"{report.valid_metric[report.selected_epoch - 1]:.3f})", file=sys.stderr)
    return 0


def _write_predictions(out: Path, examples, words):
    preds = {ex.id: w for ex, w in zip(examples, words)}
    refs = {ex.id: [t for t in ex.comment_tokens if t not in ("<s>", "</s>")] for ex in examples}
    write_summaries(out / "predictions.tsv", preds)
    write_summaries(out / "references.tsv", refs)


def cmd_predict(args, s: dict) -> int:
    splits, vocabs = load_dataset(args.data)
    model = load_checkpoint(args.checkpoint)
    examples = splits[s["split"]]
    if not examples:
        raise CliError(f"split {s['split']!r} is empty")
    data = _encode(model.config, examples, vocabs)
    idx = greedy_decode(model, data.inputs, batch_size=s["batch_size"])
    out = Path(args.out)
    _write_predictions(out, examples, indices_to_words(idx, vocabs["com"]))
    _record_run(out, "predict", s, {"data": args.data, "checkpoint": args.checkpoint, "out": out}, [model])
    print(f"wrote {len(examples)} predictions", file=sys.stderr)
    return 0


def cmd_ensemble(args, s: dict) -> int:
    splits, vocabs = load_dataset(args.data)
    models = [load_checkpoint(p) for p in args.checkpoint]
    examples = splits[s["split"]]
    if not examples:
        raise CliError(f"split {s['split']!r} is empty")
    inputs = [_encode(m.config, examples, vocabs).inputs for m in models]
    idx = ensemble_decode(models, inputs, batch_size=s["batch_size"])
    out = Path(args.out)
    _write_predictions(out, examples, indices_to_words(idx, vocabs["com"]))
    _record_run(out, "ensemble", s, {"data": args.data, "checkpoints": ",".join(args.checkpoint), "out": out},
                models)
    print(f"wrote {len(examples)} ensemble predictions from {len(models)} models", file=sys.stderr)
    return 0


def cmd_eval(args, s: dict) -> int:
    preds = read_summaries(args.predictions)
    refs = read_summaries(args.references)
    if set(preds) != set(refs):
        missing = sorted(set(refs) - set(preds))[:5]
        extra = sorted(set(preds) - set(refs))[:5]
        raise CliError(f"prediction/reference ids differ (missing {missing}, unexpected {extra})")
    report = evaluate(preds, refs, smoothing=s["smoothing"])
    out = Path(args.out)
    write_report(out, report, system=args.name)
    if args.compare:
        other = read_summaries(args.compare)
        a, b, ties, rows = orthogonality(preds, other, refs)
        write_json(out / "orthogonality.json", {"a_better": a, "b_better": b, "ties": ties,
                                                "a": str(args.predictions), "b": str(args.compare)})
        with atomic_open(out / "orthogonality.tsv") as fh:
            fh.write("id\ta\tb\n")
            for key, sa, sb in rows:
                fh.write(f"{key}\t{sa:.6f}\t{sb:.6f}\n")
    _record_run(out, "eval", s, {"predictions": args.predictions, "references": args.references,
                                 "compare": args.compare, "out": out})
    summary = report.summary()
    print(" ".join(f"{k}={v:.4g}" for k, v in summary.items()), file=sys.stderr)
    return 0


def _write_matrix(path: Path, matrix: np.ndarray):
    with atomic_open(path) as fh:
        for row in matrix:
            fh.write(",".join(f"{v:.8g}" for v in row) + "\n")


def cmd_attention(args, s: dict) -> int:
    splits, vocabs = load_dataset(args.data)
    model = load_checkpoint(args.checkpoint)
    examples = splits[s["split"]]
    by_id = {str(ex.id): ex for ex in examples}
    if str(args.method_id) not in by_id:
        shown = sorted(by_id, key=lambda k: (len(k), k))
        more = "" if len(shown) <= 50 else f" ... ({len(shown)} total)"
        raise CliError(f"method id {args.method_id} not in split {s['split']!r}; "
                       f"available ids: {' '.join(shown[:50])}{more}")
    data = _encode(model.config, [by_id[str(args.method_id)]], vocabs)
    words, steps = greedy_decode_with_attention(model, data.inputs)
    out = Path(args.out)
    # the last step holds attention rows for every generated position
    for name, matrix in steps[-1].items():
        _write_matrix(out / f"{name}_attn.csv", matrix)
    for k, step in enumerate(steps, 1):
        for name, matrix in step.items():
            _write_matrix(out / "steps" / f"{name}_attn_step{k:02d}.csv", matrix)
    summary = vocabs["com"].decode(words)
    with atomic_open(out / "summary.txt") as fh:
        fh.write(" ".join(summary) + "\n")
    _record_run(out, "attention", s, {"data": args.data, "checkpoint": args.checkpoint,
                                      "method_id": args.method_id, "out": out}, [model])
    print(f"{args.method_id}: {' '.join(summary)}", file=sys.stderr)
    return 0


# -- argument parsing --------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file of settings (overridden by env and flags)")
    p.add_argument("--seed", type=int)
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--challenge", action="store_const", const=True,
                   help="attendgru reading only the SBT-AO sequence")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--embdims", type=int)
    p.add_argument("--rnndims", type=int)
    p.add_argument("--txtlen", type=int)
    p.add_argument("--astlen", type=int)
    p.add_argument("--comlen", type=int)
    p.add_argument("--txtvocab", type=int)
    p.add_argument("--astvocab", type=int)
    p.add_argument("--sbtvocab", type=int)
    p.add_argument("--comvocab", type=int)
    p.add_argument("--ratios", help="train,valid,test fractions, e.g. 0.9,0.05,0.05")
    p.add_argument("--metric", choices=("bleu", "exact_match"))
    p.add_argument("--valid-cap", dest="valid_cap", type=int)
    p.add_argument("--smoothing", choices=SMOOTHING_MODES)
    p.add_argument("--sbt-mode", dest="sbt_mode", choices=SBT_MODES,
                   help="leaf rendering of the AST encoder input")
    p.add_argument("--whitelist", help="file of API class names kept by SBT-AO")
    p.add_argument("--split", choices=SPLITS)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codesum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="filter, tokenize and split a raw Java corpus")
    p.add_argument("--corpus", help="directory of <project>/**/*.java")
    p.add_argument("--methods", help="TSV of id, project, method source, javadoc[, file text]")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("train", help="train one model on a prepared dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="greedy summaries from one checkpoint")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("ensemble", help="greedy summaries from averaged model outputs")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", required=True, action="append", help="repeat once per model")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("eval", help="BLEU report for a predictions file")
    p.add_argument("--predictions", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--compare", help="second predictions file for per-method win counts")
    p.add_argument("--name", default="model", help="column name in permethod.tsv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("attention", help="export attention matrices for one method")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--method-id", dest="method_id", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_attention)

    for action in sub.choices.values():
        _common(action)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        settings = resolve_settings(args)
        return args.func(args, settings)
    except (CliError, ValueError, KeyError, OSError, FloatingPointError) as exc:
        print(f"codesum {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
