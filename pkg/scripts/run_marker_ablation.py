#!/usr/bin/env python3
"""Marker ablation: full markers vs. no label markers vs. no target markers.

Each row trains from scratch with the same data and seed, differing only in
which special tokens are inserted, then evaluates on the bundled test split.
Removing target markers is the damaging one: sentences with two candidate
targets for the same frame become indistinguishable to the encoder.
"""

import argparse
import json

from aged.corpus import load_mini_framenet
from aged.decoding import predict_all
from aged.encoder import Checkpoint, EncoderConfig, init_parameters
from aged.encoding import build_vocabulary
from aged.evaluation import evaluate
from aged.templates import MarkerOptions
from aged.training import TrainConfig, build_training_stream, train

VARIANTS = {
    "full": MarkerOptions(),
    "no-label-markers": MarkerOptions(frame_markers=False, role_markers=False),
    "no-target-markers": MarkerOptions(target_markers=False),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--epochs", type=int, default=60)
    ap.add_argument("--d-model", type=int, default=32)
    ap.add_argument("--layers", type=int, default=2)
    ap.add_argument("--heads", type=int, default=4)
    ap.add_argument("--lr", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    store, train_instances, test_instances = load_mini_framenet()
    vocab = build_vocabulary(train_instances, store)

    results = {}
    for name, markers in VARIANTS.items():
        config = EncoderConfig(
            vocab_size=len(vocab), d_model=args.d_model, n_layers=args.layers,
            n_heads=args.heads, max_len=256, seed=args.seed,
        )
        train_config = TrainConfig(
            epochs=args.epochs, batch_size=8, learning_rate=args.lr,
            seed=args.seed, marker_options=markers,
        )
        model = Checkpoint(config, init_parameters(config))
        stream = build_training_stream(train_instances, store, vocab, train_config)
        model, _ = train(stream, model, train_config)
        metrics = {
            "train": evaluate(
                predict_all(train_instances, store, model, vocab, markers=markers),
                train_instances).to_json(),
            "test": evaluate(
                predict_all(test_instances, store, model, vocab, markers=markers),
                test_instances).to_json(),
        }
        results[name] = metrics

    base = results["full"]["test"]["f1"]
    for name, metrics in results.items():
        metrics["test_delta_vs_full"] = round(metrics["test"]["f1"] - base, 4)
    print(json.dumps(results, indent=2))


if __name__ == "__main__":
    main()
