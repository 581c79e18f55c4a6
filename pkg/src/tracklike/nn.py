"""Dense feedforward classifier core.

Matrices are flat row-major float64 buffers; the heavy loops live in the
kernel backends (see tracklike.kernels). Layers compute activation(x.W^T + b),
the final layer is a single sigmoid unit, and gradients of the binary
cross-entropy loss are hand-derived for exactly this layer stack.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass

from . import kernels
from .errors import (
    DimensionMismatch,
    EmptyBatch,
    EmptyCounts,
    ForwardNotRun,
)

RELU = "relu"
SIGMOID = "sigmoid"
IDENTITY = "identity"
ACTIVATIONS = (RELU, SIGMOID, IDENTITY)
_ACT_CODE = {IDENTITY: 0, RELU: 1, SIGMOID: 2}

# Predictions are clamped into [PRED_CLAMP, 1 - PRED_CLAMP]; the BCE loss
# diverges at exactly 0 or 1.
PRED_CLAMP = 1e-7


def _zeros(count: int) -> array:
    return array("d", bytes(8 * count))


class Matrix:
    """Row-major float64 matrix."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: array | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if data is None:
            data = _zeros(rows * cols)
        if len(data) != rows * cols:
            raise ValueError("data length does not match rows * cols")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def from_rows(cls, rows_list) -> "Matrix":
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        buf = array("d")
        for row in rows_list:
            if len(row) != cols:
                raise ValueError("ragged rows")
            buf.extend(row)
        for v in buf:
            if not math.isfinite(v):
                raise ValueError("matrix entries must be finite")
        return cls(rows, cols, buf)

    def at(self, i: int, j: int) -> float:
        return self.data[i * self.cols + j]

    def row(self, i: int) -> list[float]:
        return list(self.data[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list[float]]:
        return [self.row(i) for i in range(self.rows)]

    def copy(self) -> "Matrix":
        return Matrix(self.rows, self.cols, array("d", self.data))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Standard matrix product with deterministic accumulation order."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.cols}-col by {b.rows}-row")
    out = Matrix.zeros(a.rows, b.cols)
    kernels.matmul(a.data, b.data, out.data, a.rows, a.cols, b.cols)
    return out


def activate(kind: str, x: float) -> float:
    """Scalar activation; sigmoid uses the overflow-safe branch form."""
    if kind == RELU:
        return x if x > 0.0 else 0.0
    if kind == SIGMOID:
        if x >= 0.0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)
    if kind == IDENTITY:
        return x
    raise ValueError(f"unknown activation '{kind}'")


@dataclass
class DenseLayer:
    w: Matrix  # out_dim x in_dim
    b: array  # out_dim
    activation: str

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation '{self.activation}'")
        if len(self.b) != self.w.rows:
            raise ValueError("bias length must equal the layer's output width")

    @property
    def out_dim(self) -> int:
        return self.w.rows

    @property
    def in_dim(self) -> int:
        return self.w.cols


class Network:
    """Chain of dense layers ending in a single sigmoid output unit."""

    def __init__(self, layers, input_dim: int):
        layers = list(layers)
        if not layers:
            raise ValueError("network needs at least one layer")
        prev = input_dim
        for layer in layers:
            if layer.in_dim != prev:
                raise DimensionMismatch(
                    f"layer expects {layer.in_dim} inputs, previous width is {prev}"
                )
            prev = layer.out_dim
        last = layers[-1]
        if last.out_dim != 1 or last.activation != SIGMOID:
            raise ValueError("final layer must be a single sigmoid unit")
        self.layers = layers
        self.input_dim = input_dim

    @classmethod
    def seeded(cls, input_dim: int, architecture, rng) -> "Network":
        """He-uniform init for relu layers, Glorot-uniform otherwise; zero
        biases. Draws only rng.random() so runs reproduce across versions."""
        layers = []
        prev = input_dim
        for width, act in architecture:
            if act == RELU:
                limit = math.sqrt(6.0 / prev)
            else:
                limit = math.sqrt(6.0 / (prev + width))
            w = Matrix(
                width,
                prev,
                array("d", ((2.0 * rng.random() - 1.0) * limit for _ in range(width * prev))),
            )
            layers.append(DenseLayer(w, _zeros(width), act))
            prev = width
        return cls(layers, input_dim)

    def parameter_buffers(self) -> list[array]:
        """Flat weight/bias buffers in layer order (shared, not copied)."""
        bufs = []
        for layer in self.layers:
            bufs.append(layer.w.data)
            bufs.append(layer.b)
        return bufs


class Batch:
    """A block of inputs with labels; forward() fills predictions."""

    def __init__(self, inputs: Matrix, labels):
        labels = list(labels)
        if inputs.rows < 1:
            raise EmptyBatch("batch needs at least one example")
        if len(labels) != inputs.rows:
            raise DimensionMismatch("one label per input row required")
        for y in labels:
            if y not in (0, 1):
                raise ValueError(f"labels must be 0 or 1, got {y!r}")
        self.inputs = inputs
        self.labels = labels
        self.predictions: list[float] | None = None
        self._activations = None

    @property
    def n(self) -> int:
        return self.inputs.rows


def dense_forward(layer: DenseLayer, inp: Matrix) -> Matrix:
    """activation(inp . W^T + b), rows are examples."""
    if inp.cols != layer.in_dim:
        raise DimensionMismatch(
            f"layer expects {layer.in_dim} inputs, got {inp.cols}"
        )
    out = Matrix.zeros(inp.rows, layer.out_dim)
    kernels.affine_nt(
        inp.data, layer.w.data, layer.b, out.data, inp.rows, inp.cols, layer.out_dim
    )
    count = inp.rows * layer.out_dim
    if layer.activation == RELU:
        kernels.relu_inplace(out.data, count)
    elif layer.activation == SIGMOID:
        kernels.sigmoid_inplace(out.data, count)
    return out


def forward(net: Network, batch: Batch) -> list[float]:
    """Layer-by-layer pass; stores clamped sigmoid outputs on the batch."""
    if batch.inputs.cols != net.input_dim:
        raise DimensionMismatch(
            f"network expects {net.input_dim} inputs, got {batch.inputs.cols}"
        )
    activations = [batch.inputs]
    current = batch.inputs
    for layer in net.layers:
        current = dense_forward(layer, current)
        activations.append(current)
    lo = PRED_CLAMP
    hi = 1.0 - PRED_CLAMP
    preds = [lo if p < lo else hi if p > hi else p for p in current.data]
    batch.predictions = preds
    batch._activations = activations
    return preds


def bce_loss(batch: Batch) -> float:
    """Mean binary cross-entropy of the batch's predictions."""
    preds = batch.predictions
    if not preds:
        raise EmptyBatch()
    total = 0.0
    for y, p in zip(batch.labels, preds):
        if y == 1:
            total += -math.log(p)
        else:
            total += -math.log(1.0 - p)
    return total / len(preds)


def backward(net: Network, batch: Batch) -> list[tuple[Matrix, array]]:
    """Reverse-mode gradients of the BCE loss, one (dW, db) per layer.

    The sigmoid/BCE pair cancels, so the output pre-activation gradient is
    (p - y) / N; the relu subgradient at 0 is 0.
    """
    if batch._activations is None or batch.predictions is None:
        raise ForwardNotRun()
    acts = batch._activations
    n = batch.n
    num_layers = len(net.layers)
    delta = Matrix.zeros(n, 1)
    for i in range(n):
        delta.data[i] = (batch.predictions[i] - batch.labels[i]) / n

    grads: list = [None] * num_layers
    for l in range(num_layers - 1, -1, -1):
        layer = net.layers[l]
        x = acts[l]
        dw = Matrix.zeros(layer.out_dim, layer.in_dim)
        kernels.matmul_tn(delta.data, x.data, dw.data, n, layer.out_dim, layer.in_dim)
        db = _zeros(layer.out_dim)
        kernels.col_sums(delta.data, db, n, layer.out_dim)
        grads[l] = (dw, db)
        if l > 0:
            dx = Matrix.zeros(n, layer.in_dim)
            kernels.matmul(delta.data, layer.w.data, dx.data, n, layer.out_dim, layer.in_dim)
            kernels.act_backward_inplace(
                dx.data, x.data, n * layer.in_dim, _ACT_CODE[net.layers[l - 1].activation]
            )
            delta = dx
    return grads


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def classify(batch: Batch, threshold: float = 0.5) -> ConfusionCounts:
    """Threshold predictions (ties count as liked) and tally against labels."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie strictly in (0, 1)")
    preds = batch.predictions
    if not preds:
        raise EmptyBatch()
    tp = tn = fp = fn = 0
    for y, p in zip(batch.labels, preds):
        predicted = 1 if p >= threshold else 0
        if predicted == 1 and y == 1:
            tp += 1
        elif predicted == 0 and y == 0:
            tn += 1
        elif predicted == 1 and y == 0:
            fp += 1
        else:
            fn += 1
    return ConfusionCounts(tp, tn, fp, fn)


def accuracy(c: ConfusionCounts) -> float:
    """Percentage of correct predictions."""
    if c.total == 0:
        raise EmptyCounts()
    return (c.tn + c.tp) / c.total * 100.0
