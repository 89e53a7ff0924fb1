"""Constrained greedy span decoding and whole-instance prediction.

For each slot the decoder maximizes start_prob[s] * end_prob[e] over valid
pairs 1 <= s <= e <= n and emits the span only if that product strictly
beats the no-argument product start_prob[0] * end_prob[0]; ties go to
no-argument. Among equal-product pairs the lexicographically smallest
(s, e) wins, so results are reproducible even on degenerate distributions.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .corpus import AnnotatedInstance, FrameStore
from .encoder import Checkpoint, forward
from .encoding import Vocabulary, assemble
from .pointer import PointerDistribution, make_queries, pointer_distributions
from .templates import (
    DEFAULT_MARKERS,
    MarkerOptions,
    TemplateMode,
    build_frame_template,
    build_question_template,
)


@dataclass(frozen=True)
class SpanPrediction:
    """A decoded slot: either a (start, end) sentence span or no argument."""

    fe: str
    span: tuple[int, int] | None
    score: float


def decode_slot(start_probs: np.ndarray, end_probs: np.ndarray) -> tuple[tuple[int, int] | None, float]:
    """Best valid span versus the no-argument product for one slot."""
    start = np.asarray(start_probs, dtype=np.float64)
    end = np.asarray(end_probs, dtype=np.float64)
    n = len(start) - 1
    null_score = float(start[0] * end[0])
    best: tuple[float, int, int] | None = None
    for s in range(1, n + 1):
        products = start[s] * end[s:]
        e_rel = int(np.argmax(products))  # first maximum: smallest e wins ties
        p = float(products[e_rel])
        if best is None or p > best[0]:
            best = (p, s, s + e_rel)
    if best is None or best[0] <= null_score:
        return None, null_score
    return (best[1], best[2]), best[0]


def decode(distributions: list[PointerDistribution]) -> list[SpanPrediction]:
    out = []
    for dist in distributions:
        span, score = decode_slot(dist.start_probs, dist.end_probs)
        out.append(SpanPrediction(dist.fe, span, score))
    return out


def predict_instance(
    instance: AnnotatedInstance,
    store: FrameStore,
    model: Checkpoint,
    vocab: Vocabulary,
    *,
    mode: TemplateMode = TemplateMode.FRAME_DEF,
    markers: MarkerOptions = DEFAULT_MARKERS,
    max_len: int | None = None,
) -> list[SpanPrediction]:
    """One prediction per FE of the instance's frame.

    Frame-definition mode extracts every argument from a single pair;
    question mode runs one single-slot pair per FE.
    """
    frame = store.frame(instance.frame)
    max_len = max_len if max_len is not None else model.config.max_len

    def run(template) -> list[SpanPrediction]:
        pair = assemble(instance, template, vocab, markers, max_len)
        encoding = forward(model.params, model.config, pair)
        queries = make_queries(encoding, pair)
        return decode(pointer_distributions(model.params, encoding, pair, queries))

    if mode is TemplateMode.QUESTION:
        predictions: list[SpanPrediction] = []
        for fe in frame.fe_order:
            predictions.extend(run(build_question_template(frame, fe, markers)))
        return predictions
    return run(build_frame_template(frame, markers))


def predict_all(
    instances: list[AnnotatedInstance],
    store: FrameStore,
    model: Checkpoint,
    vocab: Vocabulary,
    *,
    mode: TemplateMode = TemplateMode.FRAME_DEF,
    markers: MarkerOptions = DEFAULT_MARKERS,
    max_len: int | None = None,
    workers: int = 1,
) -> list[list[SpanPrediction]]:
    """Predict a whole set; parameters are read-only so instances can fan out."""

    def one(instance):
        return predict_instance(
            instance, store, model, vocab, mode=mode, markers=markers, max_len=max_len
        )

    if workers <= 1:
        return [one(inst) for inst in instances]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, instances))
