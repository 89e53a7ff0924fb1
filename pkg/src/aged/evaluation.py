"""Micro-averaged exact-match precision / recall / F1 over argument spans.

A predicted span counts as a true positive only if its FE name, start, and
end all equal a gold argument of the same instance. Slots decoded as
no-argument are not predictions; FEs without gold spans contribute nothing
to the gold count.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import AnnotatedInstance
from .decoding import SpanPrediction


@dataclass(frozen=True)
class Metrics:
    true_positives: int
    predicted_count: int
    gold_count: int
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_counts(tp: int, predicted: int, gold: int) -> "Metrics":
        precision = tp / predicted if predicted else 0.0
        recall = tp / gold if gold else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return Metrics(tp, predicted, gold, precision, recall, f1)

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "tp": self.true_positives,
            "pred": self.predicted_count,
            "gold": self.gold_count,
        }


def evaluate(
    predictions: list[list[SpanPrediction]],
    instances: list[AnnotatedInstance],
) -> Metrics:
    """Micro-average over all instances; inputs aligned by position."""
    if len(predictions) != len(instances):
        raise ValueError(
            f"misaligned inputs: {len(predictions)} prediction lists vs "
            f"{len(instances)} instances"
        )
    tp = predicted = gold = 0
    for preds, inst in zip(predictions, instances):
        gold_spans = {(a.fe, a.start, a.end) for a in inst.arguments}
        gold += len(gold_spans)
        for pred in preds:
            if pred.span is None:
                continue
            predicted += 1
            if (pred.fe, pred.span[0], pred.span[1]) in gold_spans:
                tp += 1
    return Metrics.from_counts(tp, predicted, gold)


def per_frame_metrics(
    predictions: list[list[SpanPrediction]],
    instances: list[AnnotatedInstance],
) -> dict[str, Metrics]:
    """The same micro-average computed separately per evoked frame."""
    if len(predictions) != len(instances):
        raise ValueError("misaligned inputs")
    by_frame: dict[str, tuple[list, list]] = {}
    for preds, inst in zip(predictions, instances):
        bucket = by_frame.setdefault(inst.frame, ([], []))
        bucket[0].append(preds)
        bucket[1].append(inst)
    return {frame: evaluate(p, g) for frame, (p, g) in sorted(by_frame.items())}
