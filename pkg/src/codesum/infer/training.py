"""Mini-batch training with per-epoch validation and best-epoch selection."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..corpus import Vocab
from ..metrics import corpus_bleu
from ..models import Seq2SeqModel, save_checkpoint
from ..nn import Adam
from .data import EncodedSet, batch_inputs, expand_dataset
from .decode import greedy_decode, indices_to_words

log = logging.getLogger(__name__)

METRICS = ("bleu", "exact_match")


class TrainingDiverged(FloatingPointError):
    pass


@dataclass
class TrainRunReport:
    train_loss: list[float] = field(default_factory=list)
    valid_metric: list[float] = field(default_factory=list)
    selected_epoch: int = 0
    checkpoints: list[str] = field(default_factory=list)
    metric: str = "bleu"
    skipped_methods: int = 0

    def to_dict(self) -> dict:
        return {
            "train_loss": self.train_loss,
            "valid_metric": self.valid_metric,
            "selected_epoch": self.selected_epoch,
            "checkpoints": self.checkpoints,
            "metric": self.metric,
            "skipped_methods": self.skipped_methods,
        }


def validation_score(
    model: Seq2SeqModel, data: EncodedSet, com_vocab: Vocab, metric: str = "bleu", batch_size: int = 200
) -> float:
    """Composite corpus BLEU (or exact-match percentage) of greedy decodes."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}")
    preds = indices_to_words(greedy_decode(model, data.inputs, batch_size=batch_size), com_vocab)
    if metric == "exact_match":
        return 100.0 * float(np.mean([p == r for p, r in zip(preds, data.references)]))
    return corpus_bleu(preds, data.references)


def train(
    model: Seq2SeqModel,
    train_data: EncodedSet,
    valid_data: EncodedSet | None = None,
    com_vocab: Vocab | None = None,
    epochs: int = 10,
    batch_size: int = 200,
    seed: int = 0,
    optimizer: Adam | None = None,
    checkpoint_dir: str | Path | None = None,
    valid_cap: int = 2000,
    metric: str = "bleu",
    restore_best: bool = True,
) -> TrainRunReport:
    """Train for ``epochs`` passes over the teacher-forcing pairs of ``train_data``.

    Pairs are reshuffled every epoch from a generator seeded with ``seed``.
    After each epoch the model greedily decodes (at most ``valid_cap`` methods
    of) ``valid_data`` and is scored with ``metric``; the epoch with the best
    score (earliest on ties) is selected, and its weights are restored when
    ``restore_best`` is set. Without validation data the score is the negated
    training loss. Raises :class:`TrainingDiverged` on a non-finite loss.
    """
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}")
    if valid_data is not None and com_vocab is None:
        raise ValueError("com_vocab is needed to score validation decodes")
    optimizer = optimizer or Adam()
    rng = np.random.default_rng(seed)
    pairs = expand_dataset(train_data)
    if not len(pairs):
        raise ValueError("training data produced no teacher-forcing pairs")
    if valid_data is not None and len(valid_data) > valid_cap:
        valid_data = valid_data.subset(np.arange(valid_cap))
    report = TrainRunReport(metric=metric if valid_data is not None else "neg_train_loss")
    report.skipped_methods = pairs.skipped
    best_score, best_params = -math.inf, None
    ckpt_dir = Path(checkpoint_dir) if checkpoint_dir is not None else None

    for epoch in range(1, epochs + 1):
        order = rng.permutation(len(pairs))
        total, count = 0.0, 0
        for b, lo in enumerate(range(0, len(order), batch_size)):
            sel = order[lo : lo + batch_size]
            inputs, targets = batch_inputs(train_data, pairs, sel)
            model.params.zero_grad()
            loss = model.loss_and_grad(inputs, targets)
            if not math.isfinite(loss):
                norms = ", ".join(f"{k}={v:.3g}" for k, v in model.params.norms().items())
                raise TrainingDiverged(f"non-finite loss at epoch {epoch}, batch {b}; parameter norms: {norms}")
            optimizer.step(model.params)
            total += loss * len(sel)
            count += len(sel)
        epoch_loss = total / count
        report.train_loss.append(epoch_loss)
        if valid_data is not None:
            score = validation_score(model, valid_data, com_vocab, metric, batch_size)
        else:
            score = -epoch_loss
        report.valid_metric.append(score)
        log.info("epoch %d: train loss %.4f, %s %.3f", epoch, epoch_loss, report.metric, score)
        if ckpt_dir is not None:
            path = ckpt_dir / f"epoch{epoch:03d}.ckpt"
            save_checkpoint(model, path)
            report.checkpoints.append(str(path))
        if score > best_score:
            best_score = score
            report.selected_epoch = epoch
            best_params = model.params.copy() if restore_best else None
    if restore_best and best_params is not None:
        for name in best_params:
            model.params[name] = best_params[name]
    return report
