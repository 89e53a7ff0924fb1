"""Slot queries and span pointer heads.

Each template slot becomes a query vector by elementwise-maxpooling its
contextual rows. Two weight matrices project the query and score it against
the [CLS] row plus the n sentence rows, giving softmax distributions over
the n+1 candidate start and end positions. Position 0 means "no argument".
Cross-entropy on gold starts and ends, equally weighted, is the training
loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoder import (
    ContextualEncoding,
    EncoderConfig,
    ParameterGradients,
    ParameterSet,
    backward_from_cache,
    forward_cached,
    _softmax,
)
from .encoding import EncodedPair, SlotLabel


@dataclass(frozen=True)
class QueryVector:
    fe: str
    q: np.ndarray


@dataclass(frozen=True)
class PointerDistribution:
    """Start/end probabilities over the n+1 candidate positions of one slot."""

    fe: str
    start_probs: np.ndarray
    end_probs: np.ndarray


@dataclass(frozen=True)
class LossBreakdown:
    loss_start: float
    loss_end: float
    total: float

    @staticmethod
    def combine(loss_start: float, loss_end: float) -> "LossBreakdown":
        return LossBreakdown(loss_start, loss_end, 0.5 * loss_start + 0.5 * loss_end)


def candidate_rows(encoding: ContextualEncoding, pair: EncodedPair) -> np.ndarray:
    """The (n+1, d) matrix of [CLS] plus sentence-token representations."""
    return encoding.reps[np.asarray(pair.candidate_positions())]


def make_queries(encoding: ContextualEncoding, pair: EncodedPair) -> list[QueryVector]:
    """Maxpool each slot's contextual rows (mention tokens only, no markers)."""
    queries = []
    for fe, (start, end) in zip(pair.slot_fes, pair.slot_pos):
        q = encoding.reps[start : end + 1].max(axis=0)
        queries.append(QueryVector(fe, q))
    return queries


def pointer_distributions(
    params: ParameterSet,
    encoding: ContextualEncoding,
    pair: EncodedPair,
    queries: list[QueryVector],
) -> list[PointerDistribution]:
    """Score every candidate position for every query, softmax-normalized."""
    rows = candidate_rows(encoding, pair)
    w_start, w_end = params["pointer.w_start"], params["pointer.w_end"]
    out = []
    for query in queries:
        start_probs = _softmax(rows @ (w_start @ query.q))
        end_probs = _softmax(rows @ (w_end @ query.q))
        out.append(PointerDistribution(query.fe, start_probs, end_probs))
    return out


def slot_loss(distributions: list[PointerDistribution], labels: list[SlotLabel]) -> LossBreakdown:
    """Cross entropy summed over slots: 0.5 * sum(-log p_start) + 0.5 * sum(-log p_end)."""
    if len(distributions) != len(labels):
        raise ValueError(f"{len(distributions)} distributions vs {len(labels)} labels")
    loss_start = 0.0
    loss_end = 0.0
    for dist, (s, e) in zip(distributions, labels):
        n_plus_1 = len(dist.start_probs)
        if not (0 <= s < n_plus_1 and 0 <= e < n_plus_1):
            raise ValueError(f"label ({s}, {e}) outside 0..{n_plus_1 - 1}")
        loss_start += -float(np.log(dist.start_probs[s]))
        loss_end += -float(np.log(dist.end_probs[e]))
    return LossBreakdown.combine(loss_start, loss_end)


def loss_and_gradients(
    params: ParameterSet,
    config: EncoderConfig,
    pair: EncodedPair,
    labels: list[SlotLabel],
    rng: np.random.Generator | None = None,
) -> tuple[LossBreakdown, list[PointerDistribution], ParameterGradients]:
    """One training step's forward and backward for a single pair.

    Returns the loss, the pointer distributions, and exact gradients for
    every parameter (encoder, embeddings, and both pointer matrices).
    """
    encoding, cache = forward_cached(params, config, pair, rng)
    queries = make_queries(encoding, pair)
    distributions = pointer_distributions(params, encoding, pair, queries)
    breakdown = slot_loss(distributions, labels)

    reps = encoding.reps
    dtype = reps.dtype
    cand = np.asarray(pair.candidate_positions())
    rows = reps[cand]
    w_start, w_end = params["pointer.w_start"], params["pointer.w_end"]
    d_rows = np.zeros_like(rows)
    d_reps = np.zeros_like(reps)
    dw_start = np.zeros_like(w_start)
    dw_end = np.zeros_like(w_end)

    for idx, (query, dist, (s, e)) in enumerate(zip(queries, distributions, labels)):
        dq = np.zeros_like(query.q)
        for w, dw, probs, gold in (
            (w_start, dw_start, dist.start_probs, s),
            (w_end, dw_end, dist.end_probs, e),
        ):
            # loss contribution 0.5 * -log softmax(rows @ (w @ q))[gold]
            dlogits = (0.5 * probs).astype(dtype)
            dlogits[gold] -= 0.5
            z = w @ query.q
            d_rows += np.outer(dlogits, z)
            dz = rows.T @ dlogits
            dw += np.outer(dz, query.q)
            dq += w.T @ dz
        # maxpool subgradient: each coordinate flows to the first row
        # attaining the maximum over the slot span
        s0, e0 = pair.slot_pos[idx]
        winners = reps[s0 : e0 + 1].argmax(axis=0)
        d_reps[s0 + winners, np.arange(reps.shape[1])] += dq

    np.add.at(d_reps, cand, d_rows)
    grads = backward_from_cache(params, config, cache, d_reps)
    grads["pointer.w_start"] += dw_start
    grads["pointer.w_end"] += dw_end
    return breakdown, distributions, grads
