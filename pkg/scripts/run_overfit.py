#!/usr/bin/env python3
"""Overfit the bundled mini corpus and report train-set extraction quality.

Memorizing a 40-sentence corpus is the cheapest end-to-end health check of
the whole stack: templates, encoding, encoder, pointer heads, decoding.
"""

import argparse
import json

from aged.corpus import load_mini_framenet
from aged.decoding import predict_all
from aged.encoder import Checkpoint, EncoderConfig, init_parameters
from aged.encoding import build_vocabulary
from aged.evaluation import evaluate
from aged.training import TrainConfig, build_training_stream, train


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--epochs", type=int, default=60)
    ap.add_argument("--d-model", type=int, default=32)
    ap.add_argument("--layers", type=int, default=2)
    ap.add_argument("--heads", type=int, default=4)
    ap.add_argument("--lr", type=float, default=1e-3)
    ap.add_argument("--batch-size", type=int, default=8)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--augment-fe-defs", action="store_true")
    ap.add_argument("--checkpoint", default=None, help="optionally save the trained model")
    args = ap.parse_args()

    store, train_instances, test_instances = load_mini_framenet()
    vocab = build_vocabulary(train_instances, store)
    config = EncoderConfig(
        vocab_size=len(vocab), d_model=args.d_model, n_layers=args.layers,
        n_heads=args.heads, max_len=256, seed=args.seed,
    )
    train_config = TrainConfig(
        epochs=args.epochs, batch_size=args.batch_size, learning_rate=args.lr,
        seed=args.seed, augment_fe_defs=args.augment_fe_defs,
        checkpoint_path=args.checkpoint,
    )
    model = Checkpoint(config, init_parameters(config))
    stream = build_training_stream(train_instances, store, vocab, train_config)
    model, report = train(stream, model, train_config)

    train_metrics = evaluate(predict_all(train_instances, store, model, vocab), train_instances)
    test_metrics = evaluate(predict_all(test_instances, store, model, vocab), test_instances)
    print(json.dumps({
        "stream_size": report.stream_size,
        "epochs": report.epochs,
        "first_loss": report.epoch_losses[0],
        "final_loss": report.epoch_losses[-1],
        "train": train_metrics.to_json(),
        "test": test_metrics.to_json(),
        "seconds": round(report.wallclock_seconds, 2),
    }, indent=2))


if __name__ == "__main__":
    main()
