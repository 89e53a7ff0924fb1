#!/usr/bin/env python3
"""Zero/few-shot sweep: cap a frame at K training instances and re-train.

Each K trains from scratch and reports overall and held-out-frame F1; K=full
is the uncapped baseline. Definitions keep the held-out frame queryable even
at K=0.
"""

import argparse
import json

from aged.corpus import load_mini_framenet
from aged.encoder import EncoderConfig
from aged.experiments import run_holdout_experiment
from aged.training import TrainConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--holdout", default="Getting", help="comma-separated frame names")
    ap.add_argument("--ks", default="0,2,full", help="comma-separated K values")
    ap.add_argument("--epochs", type=int, default=40)
    ap.add_argument("--d-model", type=int, default=32)
    ap.add_argument("--layers", type=int, default=2)
    ap.add_argument("--heads", type=int, default=4)
    ap.add_argument("--lr", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--augment-fe-defs", action="store_true")
    args = ap.parse_args()

    store, train_instances, test_instances = load_mini_framenet()
    frames = {f.strip() for f in args.holdout.split(",") if f.strip()}
    encoder_config = EncoderConfig(
        vocab_size=1, d_model=args.d_model, n_layers=args.layers,
        n_heads=args.heads, max_len=256, seed=args.seed,
    )

    rows = []
    for raw in args.ks.split(","):
        k = None if raw.strip().lower() == "full" else int(raw)
        train_config = TrainConfig(
            epochs=args.epochs, batch_size=8, learning_rate=args.lr, seed=args.seed,
            augment_fe_defs=args.augment_fe_defs,
        )
        report = run_holdout_experiment(
            train_instances, test_instances, store, frames, k, encoder_config, train_config
        )
        held = {f: round(report.per_frame[f].f1, 4) for f in report.holdout_frames
                if f in report.per_frame}
        rows.append({"k": "full" if k is None else k,
                     "overall_f1": round(report.overall.f1, 4),
                     "holdout_f1": held,
                     "train_counts": report.train_counts})

    print(json.dumps({"holdout": sorted(frames), "rows": rows}, indent=2))


if __name__ == "__main__":
    main()
