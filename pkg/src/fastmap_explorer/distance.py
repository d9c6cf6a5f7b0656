"""Distance functions over encoded rows.

The projection's base metric treats continuous attributes as Euclidean
coordinates and nominal ones as match/mismatch terms (0 when equal, 1 when
different), all under one square root. The Minkowski family, the four
binary-vector measures built from contingency counts, plain nominal
matching and ordinal rank scaling are exposed for analysis and for
composing alternative base metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import AttributeMeta, Metadata
from .preprocess import IndexedDataset


class DistanceError(Exception):
    pass


@dataclass
class ContingencyCounts:
    """2x2 agreement table for a pair of bit vectors: q both-present,
    r only-first, s only-second, t both-absent."""

    q: int
    r: int
    s: int
    t: int

    @property
    def p(self):
        return self.q + self.r + self.s + self.t


@dataclass
class MetricSpec:
    """Minkowski order and optional per-attribute weight multipliers.

    Absent weights mean every attribute contributes with weight 1, which
    coincides with the plain unweighted distance. ``normalized`` builds a
    spec whose weights sum to 1, the convention for comparing differently
    sized attribute sets.
    """

    L: float = 2.0
    weights: list[float] | None = None

    def validate(self, dims: int | None = None):
        if self.L < 1:
            raise DistanceError(f"Minkowski order must be >= 1, got {self.L}")
        if self.weights is not None:
            if any(w < 0 for w in self.weights):
                raise DistanceError("weights must be non-negative")
            if dims is not None and len(self.weights) != dims:
                raise DistanceError(
                    f"expected {dims} weights, got {len(self.weights)}"
                )

    @classmethod
    def normalized(cls, weights, L: float = 2.0) -> "MetricSpec":
        total = float(sum(weights))
        if total <= 0:
            raise DistanceError("weights must have a positive sum")
        return cls(L=L, weights=[w / total for w in weights])


def minkowski(x, y, spec: MetricSpec | None = None) -> float:
    """(sum of w_k |x_k - y_k|^L)^(1/L)."""
    if spec is None:
        spec = MetricSpec()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DistanceError(f"length mismatch: {x.shape} vs {y.shape}")
    spec.validate(dims=x.size)
    diffs = np.abs(x - y) ** spec.L
    if spec.weights is not None:
        diffs = diffs * np.asarray(spec.weights, dtype=float)
    return float(diffs.sum() ** (1.0 / spec.L))


def contingency(x, y) -> ContingencyCounts:
    x = np.asarray(x, dtype=int)
    y = np.asarray(y, dtype=int)
    if x.shape != y.shape:
        raise DistanceError(f"length mismatch: {x.shape} vs {y.shape}")
    q = int(np.sum((x == 1) & (y == 1)))
    r = int(np.sum((x == 1) & (y == 0)))
    s = int(np.sum((x == 0) & (y == 1)))
    t = int(np.sum((x == 0) & (y == 0)))
    return ContingencyCounts(q, r, s, t)


SIMPLE_MATCHING = "simple_matching"
HAMMING = "hamming"
JACCARD = "jaccard"
SCALAR_PRODUCT = "scalar_product"

BINARY_KINDS = (SIMPLE_MATCHING, HAMMING, JACCARD, SCALAR_PRODUCT)


def binary_distance(x, y, kind: str) -> float:
    """One of the four contingency-based bit-vector measures.

    simple_matching and jaccard are rates; hamming and scalar_product are
    counts. jaccard ignores shared absences and is undefined when both
    vectors are all-zero.
    """
    c = contingency(x, y)
    if kind == SIMPLE_MATCHING:
        if c.p == 0:
            raise DistanceError("empty vectors")
        return (c.r + c.s) / c.p
    if kind == HAMMING:
        return float(c.p - c.q - c.t)
    if kind == JACCARD:
        denom = c.q + c.r + c.s
        if denom == 0:
            raise DistanceError("jaccard undefined for two all-zero vectors")
        return (c.r + c.s) / denom
    if kind == SCALAR_PRODUCT:
        return float(c.p - c.q)
    raise DistanceError(f"unknown binary distance kind {kind!r}")


def nominal_matching(x, y) -> float:
    """Fraction of attribute positions whose tokens (as indices) differ."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise DistanceError(f"length mismatch: {x.shape} vs {y.shape}")
    p = x.size
    if p == 0:
        raise DistanceError("empty vectors")
    m = int(np.sum(x == y))
    return (p - m) / p


def ordinal_to_rank_scale(attr: AttributeMeta) -> dict[str, float]:
    """Map an ordered domain's tokens onto [0, 1] by rank, so the attribute
    can be treated as continuous afterwards."""
    m_states = len(attr.domain)
    if m_states < 2:
        raise DistanceError(
            f"attribute {attr.name!r}: rank scaling needs at least 2 states"
        )
    return {token: rank / (m_states - 1) for rank, token in enumerate(attr.domain)}


def mixed_distance(a, b, meta: Metadata) -> float:
    """Base metric between two encoded rows: squared differences for
    continuous attributes plus a 0/1 mismatch per nominal attribute, under
    one square root. Skipped attributes contribute nothing, and neither
    does the class attribute: it is the quantity being visualized, so
    feeding it into the geometry would fabricate the separation the picture
    is supposed to reveal."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    total = 0.0
    for j, attr in enumerate(meta.attributes):
        if attr.skip or attr.name == meta.class_attribute:
            continue
        if math.isnan(a[j]) or math.isnan(b[j]):
            raise DistanceError(f"attribute {attr.name!r}: missing value in distance input")
        if attr.kind == "continuous":
            total += (a[j] - b[j]) ** 2
        else:
            total += 0.0 if a[j] == b[j] else 1.0
    return math.sqrt(total)


# --------------------------------------------------------------------------
# Pairwise metrics over object indices (the projection's working interface)
# --------------------------------------------------------------------------

class MixedRowDistance:
    """mixed_distance over the rows of an IndexedDataset, vectorized.

    ``from_object(i)`` returns the distances from object i to every object
    in one shot, which is what the pivot search and axis projection consume.
    """

    def __init__(self, indexed: IndexedDataset):
        holes = indexed.missing_row_ids()
        if holes:
            raise DistanceError(
                f"dataset still has missing values in rows {holes[:5]}"
                f"{'...' if len(holes) > 5 else ''}; impute first"
            )
        meta = indexed.metadata
        cont, nom = indexed.continuous_mask, indexed.nominal_mask
        if meta.class_attribute is not None:
            nom = nom.copy()
            nom[meta.attr_index(meta.class_attribute)] = False  # labels are not geometry
        self._cont = indexed.values[:, cont]
        self._nom = indexed.values[:, nom]

    def __len__(self):
        return self._cont.shape[0]

    def between(self, i, j) -> float:
        d2 = np.sum((self._cont[i] - self._cont[j]) ** 2)
        d2 += np.sum(self._nom[i] != self._nom[j])
        return float(np.sqrt(d2))

    def from_object(self, i) -> np.ndarray:
        d2 = np.sum((self._cont - self._cont[i]) ** 2, axis=1)
        d2 = d2 + np.sum(self._nom != self._nom[i], axis=1)
        return np.sqrt(d2)


class EuclideanPoints:
    """Plain Euclidean metric over an (N, m) coordinate array."""

    def __init__(self, points):
        self._pts = np.asarray(points, dtype=float)
        if self._pts.ndim == 1:
            self._pts = self._pts.reshape(-1, 1)

    def __len__(self):
        return self._pts.shape[0]

    def between(self, i, j) -> float:
        return float(np.sqrt(np.sum((self._pts[i] - self._pts[j]) ** 2)))

    def from_object(self, i) -> np.ndarray:
        return np.sqrt(np.sum((self._pts - self._pts[i]) ** 2, axis=1))
