"""Cluster-quality metrics and per-attribute summaries.

Diameters are RMS pairwise distances within a cluster and are computed both
in the base metric and on the projected coordinates, so the two can be
compared to judge how much the dimensionality reduction distorted the data.
Radii need a centroid and are therefore only offered in coordinate spaces.
Size-weighted aggregates follow the n_i / n_i(n_i - 1) weighting; the
report carries both the raw squared aggregates and their square roots,
which are in the same units as the per-cluster values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import CONTINUOUS, MISSING, Dataset
from .distance import EuclideanPoints, MixedRowDistance
from .fastmap import Projection
from .preprocess import IndexedDataset, column_stats_of


class ClusterStatsError(Exception):
    pass


def cluster_diameter(member_indices, distance) -> float:
    """RMS distance over all ordered member pairs; 0 for a singleton."""
    n = len(member_indices)
    if n == 0:
        raise ClusterStatsError("empty cluster")
    if n == 1:
        return 0.0
    total = 0.0
    for ai in range(n):
        for bi in range(ai + 1, n):
            total += distance.between(member_indices[ai], member_indices[bi]) ** 2
    return float(np.sqrt(2.0 * total / (n * (n - 1))))


def cluster_radius(points) -> float:
    """RMS distance to the centroid of a coordinate cluster."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.shape[0] == 0:
        raise ClusterStatsError("empty cluster")
    centroid = pts.mean(axis=0)
    return float(np.sqrt(np.mean(np.sum((pts - centroid) ** 2, axis=1))))


@dataclass
class WeightedAggregates:
    """Size-weighted cluster quality; *_squared are the raw weighted means."""

    diameter: float
    diameter_squared: float
    radius: float | None = None
    radius_squared: float | None = None


def weighted_aggregates(sizes, diameters, radii=None) -> WeightedAggregates:
    """Weighted mean of squared diameters (weights n_i(n_i - 1), singletons
    drop out) and, when radii are given, of squared radii (weights n_i)."""
    pairs = [(n, d) for n, d in zip(sizes, diameters) if n >= 2]
    if not pairs:
        raise ClusterStatsError("weighted diameter needs at least one cluster of size >= 2")
    weight = sum(n * (n - 1) for n, _ in pairs)
    d_sq = sum(n * (n - 1) * d * d for n, d in pairs) / weight
    agg = WeightedAggregates(diameter=float(np.sqrt(d_sq)), diameter_squared=float(d_sq))
    if radii is not None:
        total = sum(sizes)
        r_sq = sum(n * r * r for n, r in zip(sizes, radii)) / total
        agg.radius = float(np.sqrt(r_sq))
        agg.radius_squared = float(r_sq)
    return agg


@dataclass
class ClusterEntry:
    label: str
    size: int
    diameter_base: float | None = None
    diameter_projected: float | None = None
    radius_projected: float | None = None

    @property
    def singleton(self):
        return self.size == 1


@dataclass
class ClusterReport:
    clusters: list[ClusterEntry]
    base: WeightedAggregates | None = None
    projected: WeightedAggregates | None = None
    excluded_row_ids: list[int] = field(default_factory=list)  # rows with missing values

    def to_dict(self):
        return {
            "clusters": [
                {
                    "label": c.label,
                    "size": c.size,
                    "singleton": c.singleton,
                    "diameter_base": c.diameter_base,
                    "diameter_projected": c.diameter_projected,
                    "radius_projected": c.radius_projected,
                }
                for c in self.clusters
            ],
            "weighted_base": _agg_dict(self.base),
            "weighted_projected": _agg_dict(self.projected),
            "excluded_row_ids": self.excluded_row_ids,
        }


def _agg_dict(agg):
    if agg is None:
        return None
    return {
        "diameter": agg.diameter,
        "diameter_squared": agg.diameter_squared,
        "radius": agg.radius,
        "radius_squared": agg.radius_squared,
    }


def before_after_report(indexed: IndexedDataset, projection: Projection | None = None) -> ClusterReport:
    """Per-class diameters in the base metric and, when a projection is
    given, in the projected plane, plus both weighted aggregates.

    Rows with missing active cells cannot enter the base metric and are
    excluded (listed in the report); with a projection, exactly its rows
    are used.
    """
    meta = indexed.metadata
    if meta.class_attribute is None:
        raise ClusterStatsError("no class attribute set")
    class_col = meta.attr_index(meta.class_attribute)
    domain = meta.attributes[class_col].domain

    if projection is not None:
        kept_ids = list(projection.row_ids)
    else:
        holes = set(indexed.missing_row_ids())
        kept_ids = [rid for rid in indexed.row_ids if rid not in holes]
    if not kept_ids:
        raise ClusterStatsError("no complete rows to analyze")
    excluded = [rid for rid in indexed.row_ids if rid not in set(kept_ids)]

    sub = indexed.subset(kept_ids)
    base_distance = MixedRowDistance(sub)
    labels = [domain[int(v)] for v in sub.values[:, class_col]]

    members: dict[str, list[int]] = {}
    for pos, label in enumerate(labels):
        members.setdefault(label, []).append(pos)
    ordered_labels = [t for t in domain if t in members]

    proj_points = None
    if projection is not None:
        pos_of = {rid: i for i, rid in enumerate(projection.row_ids)}
        proj_points = projection.X[[pos_of[rid] for rid in sub.row_ids]]
        proj_distance = EuclideanPoints(proj_points)

    clusters = []
    for label in ordered_labels:
        idx = members[label]
        entry = ClusterEntry(label=label, size=len(idx))
        entry.diameter_base = cluster_diameter(idx, base_distance)
        if proj_points is not None:
            entry.diameter_projected = cluster_diameter(idx, proj_distance)
            entry.radius_projected = cluster_radius(proj_points[idx])
        clusters.append(entry)

    report = ClusterReport(clusters=clusters, excluded_row_ids=excluded)
    sizes = [c.size for c in clusters]
    if any(s >= 2 for s in sizes):
        report.base = weighted_aggregates(sizes, [c.diameter_base for c in clusters])
        if proj_points is not None:
            report.projected = weighted_aggregates(
                sizes,
                [c.diameter_projected for c in clusters],
                [c.radius_projected for c in clusters],
            )
    return report


@dataclass
class AttributeSummary:
    name: str
    kind: str
    count_non_missing: int
    histogram: dict[str, int] | None = None  # nominal only, domain order
    mean: float | None = None
    std_population: float | None = None

    def to_dict(self):
        return {
            "name": self.name,
            "kind": self.kind,
            "count_non_missing": self.count_non_missing,
            "histogram": self.histogram,
            "mean": self.mean,
            "std_population": self.std_population,
        }


def attribute_summary(d: Dataset, attr_name: str) -> AttributeSummary:
    """Value histogram for nominal attributes, mean and population standard
    deviation for continuous ones; missing cells are left out."""
    attr = d.metadata.attribute(attr_name)
    values = [v for v in d.column_values(attr_name) if v is not MISSING]
    if attr.kind == CONTINUOUS:
        summary = AttributeSummary(attr.name, attr.kind, count_non_missing=len(values))
        if values:
            stats = column_stats_of(values)
            summary.mean = stats.mean
            summary.std_population = stats.std_population
        return summary
    histogram = {token: 0 for token in attr.domain}
    for token in values:
        histogram[token] = histogram.get(token, 0) + 1
    return AttributeSummary(attr.name, attr.kind, len(values), histogram=histogram)
