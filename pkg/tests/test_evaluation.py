import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aged.corpus import AnnotatedInstance, Argument
from aged.decoding import SpanPrediction
from aged.evaluation import Metrics, evaluate, per_frame_metrics


def instance(frame, *args, n=10):
    return AnnotatedInstance(
        tuple(f"w{i}" for i in range(n)), 1, frame,
        tuple(Argument(fe, s, e) for fe, s, e in args),
    )


def predictions(*spans):
    return [SpanPrediction(fe, span, 0.5) for fe, span in spans]


def test_perfect_match():
    gold = [instance("Attack", ("Assailant", 1, 1), ("Victim", 4, 4))]
    preds = [predictions(("Assailant", (1, 1)), ("Victim", (4, 4)), ("Weapon", None))]
    metrics = evaluate(preds, gold)
    assert (metrics.precision, metrics.recall, metrics.f1) == (1.0, 1.0, 1.0)


def test_partial_match_analytic():
    gold = [instance("Attack", ("Assailant", 1, 1), ("Victim", 4, 4))]
    preds = [predictions(("Assailant", (1, 1)), ("Victim", (4, 5)), ("Weapon", (2, 2)))]
    metrics = evaluate(preds, gold)
    assert metrics.precision == pytest.approx(1 / 3)
    assert metrics.recall == pytest.approx(1 / 2)
    assert metrics.f1 == pytest.approx(0.4)


def test_zero_predicted_no_division_error():
    gold = [instance("Attack", ("Assailant", 1, 1), ("Victim", 4, 4))]
    preds = [predictions(("Assailant", None), ("Victim", None))]
    metrics = evaluate(preds, gold)
    assert (metrics.precision, metrics.recall, metrics.f1) == (0.0, 0.0, 0.0)


def test_zero_gold_no_division_error():
    gold = [instance("Attack")]
    preds = [predictions(("Assailant", (1, 1)))]
    metrics = evaluate(preds, gold)
    assert (metrics.precision, metrics.recall, metrics.f1) == (0.0, 0.0, 0.0)
    assert metrics.predicted_count == 1


def test_misaligned_lengths_rejected():
    with pytest.raises(ValueError, match="misaligned"):
        evaluate([], [instance("Attack")])


def test_per_frame_grouping():
    gold = [
        instance("Attack", ("Victim", 2, 3)),
        instance("Getting", ("Theme", 1, 1)),
        instance("Attack", ("Victim", 5, 5)),
    ]
    preds = [
        predictions(("Victim", (2, 3))),
        predictions(("Theme", (2, 2))),
        predictions(("Victim", (5, 5))),
    ]
    by_frame = per_frame_metrics(preds, gold)
    assert by_frame["Attack"].f1 == 1.0
    assert by_frame["Getting"].f1 == 0.0
    overall = evaluate(preds, gold)
    assert overall.true_positives == 2


def set_oracle(prediction_lists, instances):
    """Independent recomputation via hash sets of (instance, fe, start, end)."""
    pred_set = set()
    pred_count = 0
    for i, preds in enumerate(prediction_lists):
        for p in preds:
            if p.span is not None:
                pred_count += 1
                pred_set.add((i, p.fe, p.span[0], p.span[1]))
    gold_set = {
        (i, a.fe, a.start, a.end)
        for i, inst in enumerate(instances)
        for a in inst.arguments
    }
    tp = len(pred_set & gold_set)
    p = tp / pred_count if pred_count else 0.0
    r = tp / len(gold_set) if gold_set else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return tp, pred_count, len(gold_set), p, r, f1


FES = ["A", "B", "C", "D"]


@given(seed=st.integers(0, 2**20))
@settings(max_examples=200, deadline=None)
def test_evaluate_matches_set_intersection_oracle(seed):
    rng = np.random.default_rng(seed)
    n_instances = int(rng.integers(0, 6))
    gold = []
    preds = []
    for _ in range(n_instances):
        n = int(rng.integers(2, 8))
        gold_args = []
        for fe in FES:
            if rng.random() < 0.5:
                s = int(rng.integers(1, n + 1))
                e = int(rng.integers(s, n + 1))
                gold_args.append((fe, s, e))
        gold.append(instance("Attack", *gold_args, n=n))
        inst_preds = []
        for fe in FES:
            roll = rng.random()
            if roll < 0.4:
                inst_preds.append((fe, None))
            else:
                s = int(rng.integers(1, n + 1))
                e = int(rng.integers(s, n + 1))
                inst_preds.append((fe, (s, e)))
        preds.append(predictions(*inst_preds))
    metrics = evaluate(preds, gold)
    tp, pc, gc, p, r, f1 = set_oracle(preds, gold)
    assert (metrics.true_positives, metrics.predicted_count, metrics.gold_count) == (tp, pc, gc)
    assert (metrics.precision, metrics.recall, metrics.f1) == (p, r, f1)
    assert metrics.true_positives <= min(metrics.predicted_count, metrics.gold_count)


def test_metrics_json_shape():
    metrics = Metrics.from_counts(1, 3, 2)
    doc = metrics.to_json()
    assert doc == {
        "precision": pytest.approx(1 / 3), "recall": 0.5, "f1": pytest.approx(0.4),
        "tp": 1, "pred": 3, "gold": 2,
    }
