"""Command-line front door: analyze, train, evaluate, predict, recommend.

Exit codes: 0 success, 1 data/runtime error (single-line diagnostic on
stderr), 2 usage error. Output files are staged and renamed into place only
after every payload rendered, so nothing is written on a failing run.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import collab, data
from .errors import IoError, SchemaMismatch, TracklikeError, UnknownItem, UnknownUser
from .nn import RELU, SIGMOID
from .optim import AdamConfig
from .train import (
    TrainConfig,
    evaluate,
    load_model,
    metrics_csv_text,
    predict,
    serialize_model,
    train,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracklike",
        description="Train, evaluate, and serve a hybrid music likeability model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="write correlation and per-class summary CSVs")
    p.add_argument("--data", required=True, help="input feature CSV")
    p.add_argument("--correlations", required=True, help="output correlation CSV")
    p.add_argument("--summary", required=True, help="output class summary CSV")
    p.add_argument("--label-column", default=data.DEFAULT_LABEL_COLUMN,
                   help="label column name (default: %(default)s)")

    p = sub.add_parser("train", help="fit the classifier and write model + metrics")
    p.add_argument("--data", required=True, help="input feature CSV")
    p.add_argument("--out", required=True, help="output model JSON")
    p.add_argument("--metrics", required=True, help="output per-epoch metrics CSV")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default: %(default)s)")
    p.add_argument("--epochs", type=int, default=200, help="default: %(default)s")
    p.add_argument("--batch-size", type=int, default=32, help="default: %(default)s")
    p.add_argument("--lr", type=float, default=1e-3,
                   help="Adam learning rate (default: %(default)s)")
    p.add_argument("--train-fraction", type=float, default=0.8,
                   help="stratified train share (default: %(default)s)")
    p.add_argument("--threshold", type=float, default=0.5,
                   help="like/dislike cutoff (default: %(default)s)")
    p.add_argument("--hidden", default="64,32",
                   help="comma-separated relu layer widths (default: %(default)s)")
    p.add_argument("--label-column", default=data.DEFAULT_LABEL_COLUMN,
                   help="label column name (default: %(default)s)")

    p = sub.add_parser("evaluate", help="print accuracy/loss of a model on a CSV")
    p.add_argument("--model", required=True, help="model JSON from train")
    p.add_argument("--data", required=True, help="labelled feature CSV")
    p.add_argument("--label-column", default=data.DEFAULT_LABEL_COLUMN,
                   help="label column name (default: %(default)s)")

    p = sub.add_parser("predict", help="print probability and label for one track")
    p.add_argument("--model", required=True, help="model JSON from train")
    p.add_argument("--data", required=True, help="single-record feature CSV (no label needed)")

    p = sub.add_parser("recommend", help="rank candidate tracks by hybrid score")
    p.add_argument("--model", required=True, help="model JSON from train")
    p.add_argument("--data", required=True, help="candidate feature CSV")
    p.add_argument("--ratings", required=True, help="user_id,track_id,rating CSV")
    p.add_argument("--user", required=True, help="active user id")
    p.add_argument("--lambda", dest="blend", type=float, default=0.5,
                   help="content weight in the hybrid mix (default: %(default)s)")
    p.add_argument("--top", type=int, default=10,
                   help="number of tracks to print (default: %(default)s)")
    p.add_argument("--neighbors", type=int, default=5,
                   help="neighborhood size for rating prediction (default: %(default)s)")

    return parser


def _flag_error(ns) -> str | None:
    """Range checks for numeric flags; violations are usage errors (exit 2)."""
    checks = []
    if ns.command == "train":
        try:
            _architecture_from(ns.hidden)
        except ValueError:
            return "--hidden must be comma-separated integers"
        checks = [
            (ns.epochs >= 0, "--epochs must be >= 0"),
            (ns.batch_size >= 1, "--batch-size must be >= 1"),
            (ns.lr > 0, "--lr must be positive"),
            (0 < ns.train_fraction < 1, "--train-fraction must lie in (0, 1)"),
            (0 < ns.threshold < 1, "--threshold must lie in (0, 1)"),
        ]
    elif ns.command == "recommend":
        checks = [
            (0 <= ns.blend <= 1, "--lambda must lie in [0, 1]"),
            (ns.top >= 1, "--top must be >= 1"),
            (ns.neighbors >= 1, "--neighbors must be >= 1"),
        ]
    for ok, message in checks:
        if not ok:
            return message
    return None


def _write_files(payloads: dict) -> None:
    """All-or-nothing file writes: stage to .tmp, then rename each into place."""
    staged = []
    try:
        for path, text in payloads.items():
            tmp = f"{path}.tmp"
            with open(tmp, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)
            staged.append((tmp, path))
    except OSError as exc:
        for tmp, _ in staged:
            try:
                os.remove(tmp)
            except OSError:
                pass
        raise IoError(f"cannot write output files: {exc}") from None
    for tmp, path in staged:
        os.replace(tmp, path)


def _cmd_analyze(ns) -> int:
    ds = data.load_dataset(ns.data, ns.label_column)
    correlations = data.correlation_matrix(ds)
    summary = data.class_conditional_summary(ds)
    _write_files({
        ns.correlations: data.correlation_csv_text(correlations),
        ns.summary: data.class_summary_csv_text(summary),
    })
    return 0


def _architecture_from(hidden: str) -> tuple:
    layers = []
    for part in hidden.split(","):
        part = part.strip()
        if part:
            layers.append((int(part), RELU))
    layers.append((1, SIGMOID))
    return tuple(layers)


def _cmd_train(ns) -> int:
    ds = data.load_dataset(ns.data, ns.label_column)
    architecture = _architecture_from(ns.hidden)  # validated in _flag_error
    cfg = TrainConfig(
        epochs=ns.epochs,
        batch_size=ns.batch_size,
        seed=ns.seed,
        adam=AdamConfig(alpha=ns.lr),
        architecture=architecture,
        train_fraction=ns.train_fraction,
        threshold=ns.threshold,
    )
    model, metrics = train(cfg, ds)
    _write_files({
        ns.out: serialize_model(model),
        ns.metrics: metrics_csv_text(metrics),
    })
    return 0


def _cmd_evaluate(ns) -> int:
    model = load_model(ns.model)
    ds = data.load_dataset(ns.data, ns.label_column)
    acc, loss = evaluate(model, ds)
    print(f"accuracy={acc}")
    print(f"loss={loss}")
    return 0


def _cmd_predict(ns) -> int:
    model = load_model(ns.model)
    records = data.load_feature_records(ns.data)
    if len(records) != 1:
        raise SchemaMismatch(
            f"predict expects exactly one record, found {len(records)} in {ns.data}"
        )
    probability, label = predict(model, records[0])
    print(f"probability={probability}")
    print(f"label={'like' if label == 1 else 'dislike'}")
    return 0


def _cmd_recommend(ns) -> int:
    model = load_model(ns.model)
    candidates = data.load_feature_records(ns.data)
    matrix = collab.load_ratings(ns.ratings)
    if ns.user not in matrix:
        raise UnknownUser(ns.user)
    fallback = matrix.mean_rating(ns.user)
    scored = []
    for record in candidates:
        content_p, _ = predict(model, record)
        try:
            collab_r = collab.predict_rating(matrix, ns.user, record.track_id, ns.neighbors)
        except UnknownItem:
            collab_r = fallback
        scored.append((record.track_id, collab.hybrid_score(content_p, collab_r, ns.blend)))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    print("track_id,score")
    for track_id, score in scored[: ns.top]:
        print(f"{track_id},{score}")
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "predict": _cmd_predict,
    "recommend": _cmd_recommend,
}


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    message = _flag_error(ns)
    if message is not None:
        print(f"usage error: {message}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[ns.command](ns)
    except (TracklikeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
