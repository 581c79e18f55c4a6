"""Training loop, evaluation, prediction, and model persistence.

train() stratifies the dataset, fits the min-max scaler on the train
partition only, then runs seeded mini-batch epochs of forward/backward/Adam.
Everything is deterministic for a fixed (config, dataset) pair, and saved
models reload to bit-identical predictions.
"""

from __future__ import annotations

import json
import random
from array import array
from dataclasses import dataclass, field

from . import data as data_mod
from .data import Dataset, ScalerParams, TrackRecord, scale_value, shuffled_indices, split
from .errors import (
    AlreadyScaled,
    BadConfig,
    EmptyDataset,
    IoError,
    SchemaMismatch,
    SingleClassDataset,
)
from .nn import (
    ACTIVATIONS,
    Batch,
    DenseLayer,
    Matrix,
    Network,
    RELU,
    SIGMOID,
    accuracy,
    backward,
    bce_loss,
    classify,
    forward,
)
from .optim import AdamConfig, adam_init, adam_step

MODEL_FORMAT_VERSION = 1

DEFAULT_ARCHITECTURE = ((64, RELU), (32, RELU), (1, SIGMOID))


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    batch_size: int = 32
    seed: int = 0
    adam: AdamConfig = field(default_factory=AdamConfig)
    architecture: tuple = DEFAULT_ARCHITECTURE
    train_fraction: float = 0.8
    threshold: float = 0.5

    def __post_init__(self):
        if self.epochs < 0:
            raise BadConfig(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise BadConfig(f"batch_size must be >= 1, got {self.batch_size}")
        if not self.architecture:
            raise BadConfig("architecture must have at least one layer")
        for width, act in self.architecture:
            if width < 1:
                raise BadConfig(f"layer width must be >= 1, got {width}")
            if act not in ACTIVATIONS:
                raise BadConfig(f"unknown activation '{act}'")
        if tuple(self.architecture[-1]) != (1, SIGMOID):
            raise BadConfig("final layer must be a single sigmoid unit")
        if not 0.0 < self.train_fraction < 1.0:
            raise BadConfig(
                f"train_fraction must lie in (0, 1), got {self.train_fraction}"
            )
        if not 0.0 < self.threshold < 1.0:
            raise BadConfig(f"threshold must lie in (0, 1), got {self.threshold}")


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    train_accuracy: float
    train_loss: float
    val_accuracy: float
    val_loss: float


@dataclass
class TrainedModel:
    network: Network
    scaler: ScalerParams
    config: TrainConfig
    feature_names: tuple
    format_version: int = MODEL_FORMAT_VERSION


def _batch_from(ds: Dataset) -> Batch:
    buf = array("d")
    for r in ds.records:
        buf.extend(r.features)
    return Batch(Matrix(len(ds.records), len(ds.feature_names), buf), ds.labels())


def _partition_metrics(net: Network, batch: Batch, threshold: float):
    forward(net, batch)
    return accuracy(classify(batch, threshold)), bce_loss(batch)


def train(cfg: TrainConfig, ds: Dataset):
    """Fit a model on an unscaled dataset; returns (TrainedModel, metrics)."""
    if ds.scaled:
        raise AlreadyScaled("train expects an unscaled dataset")
    if not ds.records:
        raise EmptyDataset()
    labels = set(ds.labels())
    if labels != {0, 1}:
        raise SingleClassDataset()

    train_part, val_part = split(ds, cfg.train_fraction, cfg.seed)
    if not train_part.records or not val_part.records:
        raise BadConfig("split left an empty partition; dataset too small")

    scaler = data_mod.fit_scaler(train_part)
    train_scaled = data_mod.apply_scaler(scaler, train_part)
    val_scaled = data_mod.apply_scaler(scaler, val_part)

    rng = random.Random(cfg.seed)
    net = Network.seeded(len(ds.feature_names), cfg.architecture, rng)
    params = net.parameter_buffers()
    state = adam_init(len(b) for b in params)

    rows = [r.features for r in train_scaled.records]
    row_labels = train_scaled.labels()
    n_train = len(rows)
    width = len(ds.feature_names)

    train_batch = _batch_from(train_scaled)
    val_batch = _batch_from(val_scaled)

    metrics = []
    for epoch in range(cfg.epochs):
        order = shuffled_indices(n_train, rng)
        for start in range(0, n_train, cfg.batch_size):
            chunk = order[start : start + cfg.batch_size]
            buf = array("d")
            for i in chunk:
                buf.extend(rows[i])
            batch = Batch(Matrix(len(chunk), width, buf), [row_labels[i] for i in chunk])
            forward(net, batch)
            grads = backward(net, batch)
            flat = []
            for dw, db in grads:
                flat.append(dw.data)
                flat.append(db)
            adam_step(cfg.adam, state, params, flat)
        train_acc, train_loss = _partition_metrics(net, train_batch, cfg.threshold)
        val_acc, val_loss = _partition_metrics(net, val_batch, cfg.threshold)
        metrics.append(EpochMetrics(epoch + 1, train_acc, train_loss, val_acc, val_loss))

    model = TrainedModel(net, scaler, cfg, ds.feature_names)
    return model, metrics


def evaluate(model: TrainedModel, ds: Dataset):
    """(accuracy percent, loss) of the model on a dataset.

    Unscaled data is scaled with the model's stored scaler; already scaled
    data is assumed to have used the same scaler.
    """
    if tuple(ds.feature_names) != tuple(model.feature_names):
        raise SchemaMismatch("dataset feature names/order differ from the model's")
    scaled = ds if ds.scaled else data_mod.apply_scaler(model.scaler, ds)
    batch = _batch_from(scaled)
    return _partition_metrics(model.network, batch, model.config.threshold)


def predict(model: TrainedModel, record: TrackRecord):
    """(probability, label) for one track; features are scaled and clamped."""
    if len(record.features) != len(model.feature_names):
        raise SchemaMismatch(
            f"record has {len(record.features)} features, model expects "
            f"{len(model.feature_names)}"
        )
    scaled = array(
        "d", (scale_value(model.scaler, i, v) for i, v in enumerate(record.features))
    )
    batch = Batch(Matrix(1, len(scaled), scaled), [record.history])
    p = forward(model.network, batch)[0]
    label = 1 if p >= model.config.threshold else 0
    return p, label


def serialize_model(model: TrainedModel) -> str:
    """Versioned JSON text; float fields round-trip exactly via repr."""
    cfg = model.config
    doc = {
        "format_version": model.format_version,
        "feature_names": list(model.feature_names),
        "scaler": {"mins": list(model.scaler.mins), "maxs": list(model.scaler.maxs)},
        "layers": [
            {
                "rows": layer.w.rows,
                "cols": layer.w.cols,
                "weights": list(layer.w.data),
                "bias": list(layer.b),
                "activation": layer.activation,
            }
            for layer in model.network.layers
        ],
        "config": {
            "epochs": cfg.epochs,
            "batch_size": cfg.batch_size,
            "seed": cfg.seed,
            "alpha": cfg.adam.alpha,
            "beta1": cfg.adam.beta1,
            "beta2": cfg.adam.beta2,
            "epsilon": cfg.adam.epsilon,
            "bias_correction": cfg.adam.bias_correction,
            "threshold": cfg.threshold,
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def deserialize_model(text: str) -> TrainedModel:
    try:
        doc = json.loads(text)
        version = doc["format_version"]
        if version != MODEL_FORMAT_VERSION:
            raise SchemaMismatch(f"unsupported model format_version {version}")
        feature_names = tuple(doc["feature_names"])
        scaler = ScalerParams(
            feature_names, tuple(doc["scaler"]["mins"]), tuple(doc["scaler"]["maxs"])
        )
        layers = []
        for spec in doc["layers"]:
            w = Matrix(spec["rows"], spec["cols"], array("d", spec["weights"]))
            layers.append(DenseLayer(w, array("d", spec["bias"]), spec["activation"]))
        net = Network(layers, layers[0].in_dim)
        c = doc["config"]
        cfg = TrainConfig(
            epochs=c["epochs"],
            batch_size=c["batch_size"],
            seed=c["seed"],
            adam=AdamConfig(
                alpha=c["alpha"],
                beta1=c["beta1"],
                beta2=c["beta2"],
                epsilon=c["epsilon"],
                bias_correction=c["bias_correction"],
            ),
            architecture=tuple((l.out_dim, l.activation) for l in layers),
            threshold=c["threshold"],
        )
    except SchemaMismatch:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaMismatch(f"malformed model document: {exc}") from None
    return TrainedModel(net, scaler, cfg, feature_names)


def save_model(model: TrainedModel, path) -> None:
    text = serialize_model(model)
    try:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write model to {path}: {exc}") from None


def load_model(path) -> TrainedModel:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read model from {path}: {exc}") from None
    return deserialize_model(text)


def metrics_csv_text(metrics) -> str:
    lines = ["epoch,train_accuracy,train_loss,val_accuracy,val_loss"]
    for m in metrics:
        lines.append(
            f"{m.epoch},{m.train_accuracy},{m.train_loss},{m.val_accuracy},{m.val_loss}"
        )
    return "\n".join(lines) + "\n"
