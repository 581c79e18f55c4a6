"""User-user collaborative filtering with Pearson similarity.

Similarity between two users is the Pearson coefficient of their ratings
over co-rated items, with population moments (the shared divisor cancels in
the ratio). Rating prediction blends top-k neighbor deviations from their
own means, and hybrid_score mixes that with the content model's probability.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import (
    EmptyDataset,
    MissingColumn,
    NonNumericCell,
    OutOfRange,
    UnknownItem,
    UnknownUser,
)


class PearsonStats(NamedTuple):
    value: float
    covariance: float
    std_x: float
    std_y: float
    n: int


def pearson(xs, ys) -> PearsonStats:
    """Pearson coefficient of two equal-length vectors, population moments.

    Fewer than two points, or either side constant, yields value 0.0 (the
    ratio is undefined there; 0 encodes "no linear-relationship evidence").
    """
    n = len(xs)
    if len(ys) != n:
        raise ValueError("pearson requires equal-length vectors")
    if n < 2:
        return PearsonStats(0.0, 0.0, 0.0, 0.0, n)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    cov = 0.0
    var_x = 0.0
    var_y = 0.0
    for x, y in zip(xs, ys):
        dx = x - mean_x
        dy = y - mean_y
        cov += dx * dy
        var_x += dx * dx
        var_y += dy * dy
    cov /= n
    std_x = math.sqrt(var_x / n)
    std_y = math.sqrt(var_y / n)
    if std_x == 0.0 or std_y == 0.0:
        return PearsonStats(0.0, cov, std_x, std_y, n)
    return PearsonStats(cov / (std_x * std_y), cov, std_x, std_y, n)


@dataclass(frozen=True)
class SimilarityScore:
    active: str
    other: str
    value: float
    covariance: float
    std_a: float
    std_u: float
    overlap: int


class RatingMatrix:
    """Sparse user x item ratings in [0, 1], immutable after construction."""

    def __init__(self, ratings: dict):
        by_user: dict = {}
        items: list = []
        seen_items = set()
        for (user, item), value in ratings.items():
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise OutOfRange(
                    f"rating for ({user}, {item}) is {value}, outside [0, 1]"
                )
            by_user.setdefault(user, {})[item] = value
            if item not in seen_items:
                seen_items.add(item)
                items.append(item)
        self._by_user = by_user
        self.users = tuple(by_user)
        self.items = tuple(items)
        self._item_set = seen_items

    def __contains__(self, user) -> bool:
        return user in self._by_user

    def has_item(self, item) -> bool:
        return item in self._item_set

    def ratings_of(self, user) -> dict:
        if user not in self._by_user:
            raise UnknownUser(user)
        return dict(self._by_user[user])

    def mean_rating(self, user) -> float:
        if user not in self._by_user:
            raise UnknownUser(user)
        vals = self._by_user[user]
        return sum(vals.values()) / len(vals)


def load_ratings(path) -> RatingMatrix:
    """Read a user_id,track_id,rating CSV into a RatingMatrix.

    Extra columns are ignored; a repeated (user, item) pair keeps the last
    value seen.
    """
    ratings: dict = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyDataset(path)
        lower = [h.strip().lower() for h in header]
        idx = {}
        for name in ("user_id", "track_id", "rating"):
            if name not in lower:
                raise MissingColumn(name, path)
            idx[name] = lower.index(name)
        row_num = 0
        for row in reader:
            if not row:
                continue
            row_num += 1
            try:
                value = float(row[idx["rating"]])
            except (ValueError, IndexError):
                raise NonNumericCell(row_num, "rating", path) from None
            if not math.isfinite(value):
                raise NonNumericCell(row_num, "rating", path)
            if not 0.0 <= value <= 1.0:
                raise OutOfRange(
                    f"rating at data row {row_num} is {value}, outside [0, 1] in {path}"
                )
            ratings[(row[idx["user_id"]], row[idx["track_id"]])] = value
    if not ratings:
        raise EmptyDataset(path)
    return RatingMatrix(ratings)


def pearson_similarity(m: RatingMatrix, a, u) -> SimilarityScore:
    """Similarity of users a and u over their co-rated items."""
    if a not in m:
        raise UnknownUser(a)
    if u not in m:
        raise UnknownUser(u)
    if a == u:
        raise ValueError("active and other user must differ")
    ra = m._by_user[a]
    ru = m._by_user[u]
    xs = []
    ys = []
    for item in m.items:
        if item in ra and item in ru:
            xs.append(ra[item])
            ys.append(ru[item])
    stats = pearson(xs, ys)
    return SimilarityScore(
        active=a,
        other=u,
        value=stats.value,
        covariance=stats.covariance,
        std_a=stats.std_x,
        std_u=stats.std_y,
        overlap=stats.n,
    )


def top_k_neighbors(m: RatingMatrix, a, k: int) -> list[SimilarityScore]:
    """All other users scored against a, best first, ties by user id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if a not in m:
        raise UnknownUser(a)
    scores = [pearson_similarity(m, a, u) for u in m.users if u != a]
    scores.sort(key=lambda s: (-s.value, s.other))
    return scores[:k]


def predict_rating(m: RatingMatrix, a, item, k: int) -> float:
    """Predicted rating of item for user a from top-k neighbor deviations.

    Falls back to a's own mean rating when no neighbor rated the item or the
    contributing weights cancel to zero; the result is clamped to [0, 1].
    """
    if a not in m:
        raise UnknownUser(a)
    if not m.has_item(item):
        raise UnknownItem(item)
    mean_a = m.mean_rating(a)
    num = 0.0
    den = 0.0
    for score in top_k_neighbors(m, a, k):
        r = m._by_user[score.other].get(item)
        if r is None:
            continue
        num += score.value * (r - m.mean_rating(score.other))
        den += abs(score.value)
    if den == 0.0:
        return mean_a
    predicted = mean_a + num / den
    if predicted < 0.0:
        return 0.0
    if predicted > 1.0:
        return 1.0
    return predicted


def hybrid_score(content_p: float, collab_r: float, blend: float) -> float:
    """Convex mix of the content probability and the collaborative rating."""
    for name, v in (("content_p", content_p), ("collab_r", collab_r), ("blend", blend)):
        if not 0.0 <= v <= 1.0:
            raise OutOfRange(f"{name} is {v}, outside [0, 1]")
    return blend * content_p + (1.0 - blend) * collab_r
