"""FastMap projection of N objects into k dimensions.

Each axis is anchored by an approximately farthest pair of pivot objects
found with a seeded alternating sweep. Object coordinates on the axis come
from the cosine-law formula; distances for the next axis are the residuals
in the hyperplane orthogonal to it, evaluated lazily as a stack of closures
over the base metric (no N x N matrix is ever materialized). Recursion ends
after k axes or as soon as the chosen pivots coincide, in which case the
remaining columns stay zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distance import MixedRowDistance
from .preprocess import IndexedDataset


class FastMapError(Exception):
    pass


@dataclass
class ProjectionOptions:
    k: int = 2
    pivot_iterations: int = 5
    seed: int = 0
    epsilon: float = 1e-12  # distances at or below this count as zero

    def validate(self):
        if self.k < 1:
            raise FastMapError("k must be >= 1")
        if self.pivot_iterations < 1:
            raise FastMapError("pivot_iterations must be >= 1")
        if self.epsilon < 0:
            raise FastMapError("epsilon must be >= 0")


@dataclass
class Projection:
    """Result of a run: X[i] is the k-dimensional image of object i.

    ``pivot_ids`` holds one (a, b) pivot pair per axis, as row ids. Axes the
    recursion never reached repeat the last chosen pair, so every entry is a
    valid row id; ``converged_axes`` says how many columns carry real
    coordinates. ``pivot_distances`` has one entry per converged axis: the
    pivot distance at that recursion level.
    """

    X: np.ndarray
    pivot_ids: np.ndarray  # 2 x k
    options: ProjectionOptions
    converged_axes: int
    row_ids: list[int]
    pivot_distances: list[float] = field(default_factory=list)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def k(self):
        return self.X.shape[1]

    def point_of(self, row_id) -> np.ndarray:
        return self.X[self.row_ids.index(row_id)]


def choose_pivots(distance, iterations: int, rng) -> tuple[int, int]:
    """Heuristic farthest-pair search: start from a random object, then
    alternate 'farthest from the other end' sweeps for ``iterations``
    rounds. Returns distinct object indices (their distance may still be
    zero for degenerate data)."""
    n = len(distance)
    if n < 2:
        raise FastMapError("need at least 2 objects to choose pivots")
    b = int(rng.integers(n))
    a = b
    for _ in range(iterations):
        a = int(np.argmax(distance.from_object(b)))
        b = int(np.argmax(distance.from_object(a)))
    if a == b:
        b = (a + 1) % n
    return a, b


def project_axis(distance, a: int, b: int, epsilon: float = 1e-12) -> np.ndarray:
    """Coordinate of every object on the axis through pivots a and b:
    x_i = (d_ai^2 + d_ab^2 - d_bi^2) / (2 d_ab)."""
    d_ab = distance.between(a, b)
    if d_ab <= epsilon:
        raise FastMapError("pivot distance is zero; axis undefined")
    d_ai = distance.from_object(a)
    d_bi = distance.from_object(b)
    return (d_ai**2 + d_ab**2 - d_bi**2) / (2.0 * d_ab)


class ResidualDistance:
    """Distances within the hyperplane orthogonal to the last axis:
    d'(i,j) = sqrt(max(0, d(i,j)^2 - (x_i - x_j)^2)).

    The clamp absorbs small negative squares caused by rounding or by
    non-Euclidean base metrics. Values are computed on demand from the
    wrapped metric, never stored.
    """

    def __init__(self, inner, axis_coords):
        self._inner = inner
        self._x = np.asarray(axis_coords, dtype=float)

    def __len__(self):
        return len(self._inner)

    def between(self, i, j) -> float:
        d2 = self._inner.between(i, j) ** 2 - (self._x[i] - self._x[j]) ** 2
        return float(np.sqrt(max(0.0, d2)))

    def from_object(self, i) -> np.ndarray:
        d2 = self._inner.from_object(i) ** 2 - (self._x[i] - self._x) ** 2
        return np.sqrt(np.clip(d2, 0.0, None))


def residual_distance(distance, axis_coords) -> ResidualDistance:
    return ResidualDistance(distance, axis_coords)


def fastmap(distance, options: ProjectionOptions | None = None, row_ids=None) -> Projection:
    """Run the recursive projection over a pairwise metric.

    ``distance`` provides between(i, j), from_object(i) and len(). The run
    is deterministic for a fixed seed.
    """
    opts = options or ProjectionOptions()
    opts.validate()
    n = len(distance)
    if n < 2:
        raise FastMapError("need at least 2 objects to project")
    if row_ids is None:
        row_ids = list(range(n))

    rng = np.random.default_rng(opts.seed)
    X = np.zeros((n, opts.k))
    pivot_ids = np.zeros((2, opts.k), dtype=int)
    pivot_distances: list[float] = []
    converged = 0
    current = distance

    for j in range(opts.k):
        a, b = choose_pivots(current, opts.pivot_iterations, rng)
        pivot_ids[0, j] = row_ids[a]
        pivot_ids[1, j] = row_ids[b]
        d_ab = current.between(a, b)
        if d_ab <= opts.epsilon:
            break  # all remaining distances are zero; columns j.. stay zero
        X[:, j] = project_axis(current, a, b, opts.epsilon)
        pivot_distances.append(d_ab)
        converged += 1
        current = ResidualDistance(current, X[:, j])

    for j in range(converged + 1, opts.k):
        # axes never attempted repeat the last recorded pair
        pivot_ids[:, j] = pivot_ids[:, min(converged, opts.k - 1)]

    return Projection(
        X=X,
        pivot_ids=pivot_ids,
        options=opts,
        converged_axes=converged,
        row_ids=list(row_ids),
        pivot_distances=pivot_distances,
    )


def project_dataset(indexed: IndexedDataset, options: ProjectionOptions | None = None) -> Projection:
    """Project an IndexedDataset with the mixed-type base metric."""
    return fastmap(MixedRowDistance(indexed), options, row_ids=indexed.row_ids)
