import random

import pytest

from tracklike.data import FEATURE_NAMES, Dataset, TrackRecord

_DEFAULTS = {
    "acousticness": 0.3,
    "danceability": 0.6,
    "duration_ms": 210000.0,
    "energy": 0.7,
    "instrumentalness": 0.1,
    "key": 5.0,
    "liveness": 0.2,
    "loudness": -7.0,
    "mode": 1.0,
    "speechiness": 0.05,
    "tempo": 120.0,
    "time_signature": 4.0,
    "valence": 0.5,
}


def features(**overrides) -> tuple:
    vals = dict(_DEFAULTS)
    vals.update(overrides)
    return tuple(vals[name] for name in FEATURE_NAMES)


def make_dataset(rows, scaled=False) -> Dataset:
    """rows: list of (overrides dict, label) or (track_id, overrides, label)."""
    records = []
    for i, row in enumerate(rows):
        if len(row) == 3:
            track_id, overrides, label = row
        else:
            overrides, label = row
            track_id = str(i)
        records.append(TrackRecord(track_id, features(**overrides), label))
    return Dataset(tuple(records), FEATURE_NAMES, scaled)


def random_dataset(rng: random.Random, n: int, scale: float = 1.0) -> Dataset:
    records = []
    for i in range(n):
        vals = tuple(scale * (2.0 * rng.random() - 1.0) for _ in FEATURE_NAMES)
        records.append(TrackRecord(str(i), vals, rng.randint(0, 1)))
    return Dataset(tuple(records), FEATURE_NAMES, False)


@pytest.fixture
def rng():
    return random.Random(987654321)
