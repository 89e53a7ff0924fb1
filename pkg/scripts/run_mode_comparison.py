#!/usr/bin/env python3
"""Query-mode comparison: frame definitions vs. role-specific questions.

Three configurations trained from scratch on the same data and seed:

  frame-def       one multi-slot pair per instance
  frame-def+aug   frame definitions plus FE-definition pairs for gold roles
  question        one single-slot "What's X of Y ?" pair per FE per instance

Also reports how many encoder passes inference needs per split, which is
the efficiency edge of multi-slot definitions over per-role questions.
"""

import argparse
import json

from aged.corpus import load_mini_framenet
from aged.decoding import predict_all
from aged.encoder import Checkpoint, EncoderConfig, init_parameters
from aged.encoding import build_vocabulary
from aged.evaluation import evaluate
from aged.templates import TemplateMode
from aged.training import TrainConfig, build_training_stream, train

RUNS = [
    ("frame-def", TemplateMode.FRAME_DEF, False),
    ("frame-def+aug", TemplateMode.FRAME_DEF, True),
    ("question", TemplateMode.QUESTION, False),
]


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
    for name, mode, augment in RUNS:
        config = EncoderConfig(
            vocab_size=len(vocab), d_model=args.d_model, n_layers=args.layers,
            n_heads=args.heads, max_len=256, seed=args.seed,
        )
        train_config = TrainConfig(
            epochs=args.epochs, batch_size=8, learning_rate=args.lr, seed=args.seed,
            template_mode=mode, augment_fe_defs=augment,
        )
        model = Checkpoint(config, init_parameters(config))
        stream = build_training_stream(train_instances, store, vocab, train_config)
        model, report = train(stream, model, train_config)
        predictions = predict_all(test_instances, store, model, vocab, mode=mode)
        inference_passes = (
            sum(len(store.frame(i.frame).fe_order) for i in test_instances)
            if mode is TemplateMode.QUESTION else len(test_instances)
        )
        results[name] = {
            "train_pairs": report.stream_size,
            "inference_passes": inference_passes,
            "test": evaluate(predictions, test_instances).to_json(),
        }

    print(json.dumps(results, indent=2))


if __name__ == "__main__":
    main()
