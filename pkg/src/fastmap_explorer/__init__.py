"""Interactive FastMap explorer for mixed-type, class-labeled tabular data."""

from .dataset import (
    CONTINUOUS,
    MISSING,
    NOMINAL,
    AttributeMeta,
    Dataset,
    Metadata,
    parse_data,
    parse_names,
    serialize_names,
    write_data,
)
from .distance import EuclideanPoints, MetricSpec, MixedRowDistance, minkowski, mixed_distance
from .fastmap import Projection, ProjectionOptions, fastmap, project_dataset
from .preprocess import IndexedDataset, impute_missing, index_dataset
from .cluster_stats import attribute_summary, before_after_report
from .extract import ConditionSchema, ConditionSet, Query, emit_sql, evaluate, smart_link
from .session import ProjectRequest, Session

__all__ = [
    "AttributeMeta",
    "CONTINUOUS",
    "ConditionSchema",
    "ConditionSet",
    "Dataset",
    "EuclideanPoints",
    "IndexedDataset",
    "MISSING",
    "Metadata",
    "MetricSpec",
    "MixedRowDistance",
    "NOMINAL",
    "ProjectRequest",
    "Projection",
    "ProjectionOptions",
    "Query",
    "Session",
    "attribute_summary",
    "before_after_report",
    "emit_sql",
    "evaluate",
    "fastmap",
    "impute_missing",
    "index_dataset",
    "minkowski",
    "mixed_distance",
    "parse_data",
    "parse_names",
    "project_dataset",
    "serialize_names",
    "smart_link",
    "write_data",
]

__version__ = "0.1.0"
