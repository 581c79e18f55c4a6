#!/usr/bin/env python3
"""Time the compiled kernels against the pure-Python fallback.

Covers the three hot paths (matrix products, a forward/backward sweep, Adam
updates) plus a short end-to-end training run. Results are wall-clock medians
over --repeat runs; both backends execute the identical workload and, by
construction, produce bit-identical numbers.

Usage:
    python benchmarks/bench_backends.py [--repeat 5] [--rows 400]
"""

import argparse
import random
import statistics
import time
from array import array

from tracklike import kernels
from tracklike.nn import Batch, Matrix, Network, RELU, SIGMOID, backward, forward
from tracklike.optim import AdamConfig, adam_init, adam_step
from tracklike.synth import make_listening_dataset
from tracklike.train import TrainConfig, train


def timed(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench_matmul(rng, size=64, iters=20):
    n = size * size
    a = array("d", [rng.uniform(-1, 1) for _ in range(n)])
    b = array("d", [rng.uniform(-1, 1) for _ in range(n)])
    out = array("d", bytes(8 * n))

    def run():
        for _ in range(iters):
            kernels.matmul(a, b, out, size, size, size)

    return run


def bench_forward_backward(rng, rows=256, iters=10):
    net = Network.seeded(13, ((64, RELU), (32, RELU), (1, SIGMOID)), rng)
    inputs = Matrix.from_rows(
        [[rng.random() for _ in range(13)] for _ in range(rows)]
    )
    labels = [rng.randint(0, 1) for _ in range(rows)]

    def run():
        for _ in range(iters):
            batch = Batch(inputs, labels)
            forward(net, batch)
            backward(net, batch)

    return run


def bench_adam(rng, size=4096, iters=50):
    cfg = AdamConfig(alpha=1e-3)
    w = array("d", [rng.uniform(-1, 1) for _ in range(size)])
    g = array("d", [rng.uniform(-1, 1) for _ in range(size)])
    state = adam_init([size])

    def run():
        for _ in range(iters):
            adam_step(cfg, state, [w], [g])

    return run


def bench_training(rows, epochs=5):
    ds = make_listening_dataset(rows, seed=7)
    cfg = TrainConfig(epochs=epochs, seed=0)

    def run():
        train(cfg, ds)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="runs per measurement")
    parser.add_argument("--rows", type=int, default=400, help="training rows")
    args = parser.parse_args()

    if "c" not in kernels.available_backends():
        print("compiled extension not built; nothing to compare against")
        return

    benches = {
        "matmul 64x64 x20": lambda rng: bench_matmul(rng),
        "fwd+bwd 256x(13-64-32-1) x10": lambda rng: bench_forward_backward(rng),
        "adam 4096 params x50": lambda rng: bench_adam(rng),
        f"train {args.rows} rows, 5 epochs": lambda rng: bench_training(args.rows),
    }

    print(f"{'workload':<32} {'c':>10} {'python':>10} {'speedup':>9}")
    for name, make in benches.items():
        results = {}
        for backend in ("c", "python"):
            kernels.set_backend(backend)
            run = make(random.Random(1))
            run()  # warm-up
            results[backend] = timed(run, args.repeat)
        speedup = results["python"] / results["c"]
        print(
            f"{name:<32} {results['c'] * 1e3:>8.2f}ms {results['python'] * 1e3:>8.2f}ms"
            f" {speedup:>8.1f}x"
        )
    kernels.set_backend("c")


if __name__ == "__main__":
    main()
