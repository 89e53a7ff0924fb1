"""Training-stream construction and the seeded mini-batch training loop.

Every instance contributes a (sentence, frame-definition) pair. With FE
augmentation on, each gold argument additionally contributes a (sentence,
FE-definition) pair for its role, so stream size is exactly
|instances| + total gold arguments. The question baseline instead builds
one single-slot pair per FE of the frame.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import AnnotatedInstance, FrameStore
from .encoder import Checkpoint, ParameterGradients, ParameterSet, save_checkpoint
from .encoding import EncodedPair, SlotLabel, Vocabulary, assemble, gold_labels
from .pointer import loss_and_gradients
from .templates import (
    DEFAULT_MARKERS,
    MarkerOptions,
    TemplateMode,
    build_fe_template,
    build_frame_template,
    build_question_template,
)

logger = logging.getLogger(__name__)

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


class NonFiniteLossError(RuntimeError):
    """Training produced a NaN or infinite loss."""


@dataclass
class TrainConfig:
    epochs: int = 200
    batch_size: int = 8
    learning_rate: float = 1e-3
    seed: int = 7
    augment_fe_defs: bool = False
    marker_options: MarkerOptions = DEFAULT_MARKERS
    template_mode: TemplateMode = TemplateMode.FRAME_DEF
    checkpoint_path: str | Path | None = None
    eval_every: int = 0  # 0 disables dev evaluation
    grad_clip: float = 1.0
    max_len: int = 256

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.template_mode is TemplateMode.FE_DEF:
            raise ValueError("fe-def is an augmentation mode, not a training template_mode")


@dataclass(frozen=True)
class Provenance:
    kind: TemplateMode
    fe: str | None = None


@dataclass
class TrainingExample:
    pair: EncodedPair
    labels: list[SlotLabel]
    provenance: Provenance


def build_training_stream(
    instances: list[AnnotatedInstance],
    store: FrameStore,
    vocab: Vocabulary,
    config: TrainConfig,
) -> list[TrainingExample]:
    """Deterministic stream: instance order, then the frame's FE order."""
    opts = config.marker_options
    stream: list[TrainingExample] = []
    frame_templates = {
        frame.name: build_frame_template(frame, opts) for frame in store
    }
    for inst in instances:
        frame = store.frame(inst.frame)
        if config.template_mode is TemplateMode.QUESTION:
            for fe in frame.fe_order:
                tpl = build_question_template(frame, fe, opts)
                stream.append(TrainingExample(
                    assemble(inst, tpl, vocab, opts, config.max_len),
                    gold_labels(inst, tpl),
                    Provenance(TemplateMode.QUESTION, fe),
                ))
            continue
        tpl = frame_templates[inst.frame]
        stream.append(TrainingExample(
            assemble(inst, tpl, vocab, opts, config.max_len),
            gold_labels(inst, tpl),
            Provenance(TemplateMode.FRAME_DEF),
        ))
        if config.augment_fe_defs:
            gold_fes = {a.fe for a in inst.arguments}
            for fe in frame.fe_order:
                if fe not in gold_fes:
                    continue
                fe_tpl = build_fe_template(frame, fe, opts)
                stream.append(TrainingExample(
                    assemble(inst, fe_tpl, vocab, opts, config.max_len),
                    gold_labels(inst, fe_tpl),
                    Provenance(TemplateMode.FE_DEF, fe),
                ))
    return stream


class Adam:
    """Plain Adam with bias correction; no schedule, no weight decay."""

    def __init__(self, params: ParameterSet, lr: float):
        self.lr = lr
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params: ParameterSet, grads: ParameterGradients) -> None:
        self.t += 1
        b1, b2 = ADAM_BETAS
        c1 = 1.0 - b1**self.t
        c2 = 1.0 - b2**self.t
        for k, p in params.items():
            g = grads[k]
            self.m[k] = b1 * self.m[k] + (1.0 - b1) * g
            self.v[k] = b2 * self.v[k] + (1.0 - b2) * g * g
            p -= self.lr * (self.m[k] / c1) / (np.sqrt(self.v[k] / c2) + ADAM_EPS)


def clip_gradients(grads: ParameterGradients, max_norm: float) -> float:
    """Scale gradients in place to a global-norm cap; returns the pre-clip norm."""
    total = math.sqrt(sum(float((g * g).sum()) for g in grads.values()))
    if max_norm > 0 and total > max_norm:
        scale = max_norm / total
        for k in grads:
            grads[k] = grads[k] * scale
    return total


@dataclass
class TrainingReport:
    epochs: int
    stream_size: int
    epoch_losses: list[float] = field(default_factory=list)
    dev_f1_history: list[tuple[int, float]] = field(default_factory=list)
    best_dev_f1: float | None = None
    best_epoch: int | None = None
    checkpoint_path: str | None = None
    best_checkpoint_path: str | None = None
    wallclock_seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "epochs": self.epochs,
            "stream_size": self.stream_size,
            "epoch_losses": self.epoch_losses,
            "dev_f1_history": [[e, f] for e, f in self.dev_f1_history],
            "best_dev_f1": self.best_dev_f1,
            "best_epoch": self.best_epoch,
            "checkpoint_path": self.checkpoint_path,
            "best_checkpoint_path": self.best_checkpoint_path,
            "wallclock_seconds": self.wallclock_seconds,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2), encoding="utf-8")


def train(
    stream: list[TrainingExample],
    model: Checkpoint,
    config: TrainConfig,
    *,
    store: FrameStore | None = None,
    vocab: Vocabulary | None = None,
    dev: list[AnnotatedInstance] | None = None,
) -> tuple[Checkpoint, TrainingReport]:
    """Run seeded shuffled mini-batch training; returns a trained copy of the model.

    Per-example losses are summed over slots; batches average over examples.
    Dev F1 is computed every `eval_every` epochs when a dev set, store, and
    vocabulary are supplied, and the best-dev checkpoint is saved alongside
    the final one.
    """
    if not stream:
        raise ValueError("training stream is empty")
    model = model.copy()
    params, enc_config = model.params, model.config
    optimizer = Adam(params, config.learning_rate)
    report = TrainingReport(epochs=config.epochs, stream_size=len(stream))
    dropout_rng = (
        np.random.default_rng((enc_config.seed, config.seed))
        if enc_config.dropout > 0 else None
    )
    started = time.monotonic()

    for epoch in range(config.epochs):
        order = np.random.default_rng((config.seed, epoch)).permutation(len(stream))
        epoch_loss = 0.0
        for batch_no, lo in enumerate(range(0, len(order), config.batch_size)):
            batch = order[lo : lo + config.batch_size]
            grads_sum: ParameterGradients | None = None
            batch_loss = 0.0
            for idx in batch:
                ex = stream[idx]
                breakdown, _, grads = loss_and_gradients(
                    params, enc_config, ex.pair, ex.labels, dropout_rng
                )
                batch_loss += breakdown.total
                if grads_sum is None:
                    grads_sum = grads
                else:
                    for k in grads_sum:
                        grads_sum[k] += grads[k]
            if not math.isfinite(batch_loss):
                raise NonFiniteLossError(
                    f"non-finite loss at epoch {epoch}, batch {batch_no} "
                    f"(examples {[int(i) for i in batch]})"
                )
            inv = 1.0 / len(batch)
            for k in grads_sum:
                grads_sum[k] = grads_sum[k] * inv
            clip_gradients(grads_sum, config.grad_clip)
            optimizer.step(params, grads_sum)
            epoch_loss += batch_loss
        mean_loss = epoch_loss / len(order)
        report.epoch_losses.append(mean_loss)
        logger.info("epoch %d: mean loss %.6f", epoch, mean_loss)

        if (
            dev is not None and store is not None and vocab is not None
            and config.eval_every > 0 and (epoch + 1) % config.eval_every == 0
        ):
            f1 = _dev_f1(model, store, vocab, dev, config)
            report.dev_f1_history.append((epoch, f1))
            logger.info("epoch %d: dev F1 %.4f", epoch, f1)
            if report.best_dev_f1 is None or f1 > report.best_dev_f1:
                report.best_dev_f1 = f1
                report.best_epoch = epoch
                if config.checkpoint_path is not None:
                    best_path = str(config.checkpoint_path) + ".best"
                    save_checkpoint(model, best_path)
                    report.best_checkpoint_path = best_path

    report.wallclock_seconds = time.monotonic() - started
    if config.checkpoint_path is not None:
        save_checkpoint(model, config.checkpoint_path)
        report.checkpoint_path = str(config.checkpoint_path)
    return model, report


def _dev_f1(model, store, vocab, dev, config) -> float:
    from .decoding import predict_all
    from .evaluation import evaluate

    predictions = predict_all(
        dev, store, model, vocab,
        mode=config.template_mode, markers=config.marker_options, max_len=config.max_len,
    )
    return evaluate(predictions, dev).f1
