"""Deterministic synthetic track datasets.

Stand-in for the public Spotify-attributes data: liked and disliked tracks
draw their features from different distributions with realistic scales and
deliberate overlap, so a classifier can beat chance on held-out rows while
memorizing the training rows. All draws come from rng.random() only, so a
seed pins the dataset across Python versions.
"""

from __future__ import annotations

import math
import random

from .data import FEATURE_NAMES, Dataset, TrackRecord, shuffled_indices

_TWO_PI = 2.0 * math.pi


def _gauss(rng) -> float:
    # Box-Muller from two uniforms
    u1 = rng.random()
    while u1 <= 1e-300:
        u1 = rng.random()
    u2 = rng.random()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)


def _clipped_gauss(rng, mu, sigma, lo, hi) -> float:
    v = mu + sigma * _gauss(rng)
    return lo if v < lo else hi if v > hi else v


def _pick(rng, choices, weights) -> float:
    r = rng.random()
    acc = 0.0
    for c, w in zip(choices, weights):
        acc += w
        if r < acc:
            return c
    return choices[-1]


# (mu, sigma, lo, hi) per class: index 0 = liked, 1 = disliked. The class
# means sit well under one sigma apart per feature, so held-out accuracy
# saturates noticeably below a memorized training fit.
_GAUSS_RECIPES = {
    "acousticness": ((0.32, 0.19, 0.0, 1.0), (0.48, 0.21, 0.0, 1.0)),
    "danceability": ((0.66, 0.15, 0.0, 1.0), (0.51, 0.16, 0.0, 1.0)),
    "duration_ms": ((212000.0, 39000.0, 30000.0, 600000.0), (228000.0, 46000.0, 30000.0, 600000.0)),
    "energy": ((0.64, 0.15, 0.0, 1.0), (0.52, 0.17, 0.0, 1.0)),
    "instrumentalness": ((0.12, 0.14, 0.0, 1.0), (0.27, 0.22, 0.0, 1.0)),
    "liveness": ((0.18, 0.10, 0.0, 1.0), (0.215, 0.12, 0.0, 1.0)),
    "loudness": ((-7.0, 2.7, -60.0, 0.0), (-9.2, 3.4, -60.0, 0.0)),
    "speechiness": ((0.08, 0.06, 0.0, 1.0), (0.115, 0.09, 0.0, 1.0)),
    "tempo": ((121.0, 20.0, 40.0, 220.0), (113.0, 25.0, 40.0, 220.0)),
    "valence": ((0.62, 0.17, 0.0, 1.0), (0.46, 0.18, 0.0, 1.0)),
}


def _synth_features(rng, liked: bool) -> tuple:
    side = 0 if liked else 1
    values = []
    for name in FEATURE_NAMES:
        if name == "key":
            v = float(int(rng.random() * 12.0))
        elif name == "mode":
            v = 1.0 if rng.random() < (0.68 if liked else 0.58) else 0.0
        elif name == "time_signature":
            if liked:
                v = _pick(rng, (3.0, 4.0, 5.0), (0.08, 0.88, 0.04))
            else:
                v = _pick(rng, (3.0, 4.0, 5.0), (0.12, 0.82, 0.06))
        else:
            mu, sigma, lo, hi = _GAUSS_RECIPES[name][side]
            v = _clipped_gauss(rng, mu, sigma, lo, hi)
        values.append(v)
    return tuple(values)


def make_listening_dataset(n_records: int, seed: int, liked_fraction: float = 0.5) -> Dataset:
    """Overlapping class-conditional feature mixes with a binary like label."""
    rng = random.Random(seed)
    n_liked = int(round(liked_fraction * n_records))
    records = []
    for i in range(n_records):
        liked = i < n_liked
        records.append(
            TrackRecord(f"t{i:05d}", _synth_features(rng, liked), 1 if liked else 0)
        )
    order = shuffled_indices(len(records), rng)
    return Dataset(tuple(records[i] for i in order))


def make_separable_dataset(n_records: int, seed: int) -> Dataset:
    """Linearly separable toy set: the like label follows danceability with a
    wide margin around 0.5; every other feature is uninformative noise."""
    rng = random.Random(seed)
    n_liked = n_records // 2
    records = []
    for i in range(n_records):
        liked = i < n_liked
        values = []
        for name in FEATURE_NAMES:
            if name == "danceability":
                v = 0.55 + 0.4 * rng.random() if liked else 0.05 + 0.4 * rng.random()
            elif name == "duration_ms":
                v = 120000.0 + 240000.0 * rng.random()
            elif name == "loudness":
                v = -30.0 + 28.0 * rng.random()
            elif name == "tempo":
                v = 60.0 + 140.0 * rng.random()
            elif name == "key":
                v = float(int(rng.random() * 12.0))
            elif name == "mode":
                v = 1.0 if rng.random() < 0.5 else 0.0
            elif name == "time_signature":
                v = _pick(rng, (3.0, 4.0, 5.0), (0.1, 0.8, 0.1))
            else:
                v = rng.random()
            values.append(v)
        records.append(TrackRecord(f"t{i:05d}", tuple(values), 1 if liked else 0))
    order = shuffled_indices(len(records), rng)
    return Dataset(tuple(records[i] for i in order))
