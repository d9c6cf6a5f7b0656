"""Cleaning and numeric encoding ahead of projection.

Continuous columns get summary statistics, normalization (min-max, z-score
with a standard-deviation or mean-absolute-deviation denominator, decimal
scaling) and simple noise diagnostics. Nominal columns are encoded as domain
indices. The result is an IndexedDataset: one float matrix where skipped
columns are fully null and missing cells stay marked, ready for the distance
kernels.
"""

from __future__ import annotations

import statistics
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import CONTINUOUS, MISSING, NOMINAL, Dataset, Metadata


class PreprocessError(Exception):
    pass


class PreprocessWarning(UserWarning):
    pass


@dataclass
class ColumnStats:
    """Summary of one continuous column's non-missing values.

    ``std_population`` divides by n, not n-1, matching the population
    convention used by the mean-absolute-deviation variant.
    """

    mean: float
    std_population: float
    mean_abs_dev: float
    min: float
    max: float
    count_non_missing: int


@dataclass
class NormalizationParams:
    """Recorded transform so future values can be scaled identically."""

    kind: str  # "min_max" | "z_score" | "decimal"
    stats: ColumnStats
    new_min: float | None = None
    new_max: float | None = None
    variant: str | None = None  # "sigma" | "mad"
    j: int | None = None


def _non_missing(values):
    return [float(v) for v in values if v is not MISSING]


def compute_column_stats(d: Dataset, attr_name: str) -> ColumnStats:
    attr = d.metadata.attribute(attr_name)
    if attr.kind != CONTINUOUS:
        raise PreprocessError(f"attribute {attr_name!r} is not continuous")
    return column_stats_of(d.column_values(attr_name))


def column_stats_of(values) -> ColumnStats:
    xs = _non_missing(values)
    if not xs:
        raise PreprocessError("no non-missing values")
    mean = sum(xs) / len(xs)
    var = sum((x - mean) ** 2 for x in xs) / len(xs)
    mad = sum(abs(x - mean) for x in xs) / len(xs)
    return ColumnStats(
        mean=mean,
        std_population=var**0.5,
        mean_abs_dev=mad,
        min=min(xs),
        max=max(xs),
        count_non_missing=len(xs),
    )


def min_max_normalize(values, stats: ColumnStats, new_min: float, new_max: float):
    """Linear map of [min, max] onto [new_min, new_max]; MISSING passes through."""
    if stats.max <= stats.min:
        raise PreprocessError("constant column: min-max normalization would divide by zero")
    if new_max <= new_min:
        raise PreprocessError("target range is empty")
    span = stats.max - stats.min
    out = [
        v if v is MISSING else (v - stats.min) / span * (new_max - new_min) + new_min
        for v in values
    ]
    params = NormalizationParams(kind="min_max", stats=stats, new_min=new_min, new_max=new_max)
    return out, params


def z_normalize(values, stats: ColumnStats, variant: str = "sigma"):
    """Center on the mean and divide by the population standard deviation
    (``sigma``) or the mean absolute deviation (``mad``)."""
    denom = _z_denominator(stats, variant)
    if denom <= 0.0:
        raise PreprocessError("zero-variance column: z-normalization undefined")
    out = [v if v is MISSING else (v - stats.mean) / denom for v in values]
    return out, NormalizationParams(kind="z_score", stats=stats, variant=variant)


def _z_denominator(stats, variant):
    if variant == "sigma":
        return stats.std_population
    if variant == "mad":
        return stats.mean_abs_dev
    raise PreprocessError(f"unknown z-normalization variant {variant!r}")


def decimal_scale(values):
    """Divide by the smallest power of ten that brings every |v| below 1."""
    xs = _non_missing(values)
    if not xs:
        raise PreprocessError("all-missing column")
    peak = max(abs(x) for x in xs)
    j = 0
    while peak / 10**j >= 1.0:
        j += 1
    out = [v if v is MISSING else v / 10**j for v in values]
    stats = column_stats_of(values)
    return out, NormalizationParams(kind="decimal", stats=stats, j=j)


def coefficient_of_variation(stats: ColumnStats) -> float:
    """Spread as a percentage of the mean."""
    if stats.mean == 0.0:
        raise PreprocessError("coefficient of variation undefined for zero mean")
    return stats.std_population / stats.mean * 100.0


def _tukey_quartiles(sorted_values):
    # Median-of-halves (hinges): odd-length data excludes the overall median
    # from both halves.
    n = len(sorted_values)
    half = n // 2
    lower = sorted_values[:half]
    upper = sorted_values[n - half:]
    return statistics.median(lower), statistics.median(upper)


def iqr_outliers(values, row_ids=None, factor: float = 1.5) -> list[int]:
    """Row ids whose value lies beyond ``factor`` interquartile ranges
    outside the quartiles. Needs at least 4 non-missing values."""
    if row_ids is None:
        row_ids = list(range(len(values)))
    pairs = [(rid, float(v)) for rid, v in zip(row_ids, values) if v is not MISSING]
    if len(pairs) < 4:
        raise PreprocessError("need at least 4 non-missing values for quartiles")
    q1, q3 = _tukey_quartiles(sorted(v for _, v in pairs))
    iqr = q3 - q1
    low, high = q1 - factor * iqr, q3 + factor * iqr
    return [rid for rid, v in pairs if v < low or v > high]


# --------------------------------------------------------------------------
# Missing-value imputation
# --------------------------------------------------------------------------

DROP_ROW = "drop_row"
GLOBAL_CONSTANT = "global_constant"
MEAN_OR_MODE = "mean_or_mode"
CLASS_CONDITIONAL = "class_conditional"


@dataclass
class ImputeReport:
    strategy: str
    affected: list[tuple[int, str]] = field(default_factory=list)  # (row_id, attribute)


def impute_missing(d: Dataset, strategy: str, constant=None) -> tuple[Dataset, ImputeReport]:
    """Resolve MISSING cells in all non-skipped columns.

    drop_row removes rows holding any missing active cell; global_constant
    substitutes one value everywhere; mean_or_mode fills continuous columns
    with the column mean and nominal ones with the most frequent token;
    class_conditional does the same within each class. Skipped columns are
    left untouched (a skipped column may legitimately be entirely missing).
    """
    report = ImputeReport(strategy=strategy)
    meta = d.metadata
    active = [(i, a) for i, a in enumerate(meta.attributes) if not a.skip]

    if strategy == DROP_ROW:
        keep_rows, keep_ids = [], []
        for rid, row in zip(d.row_ids, d.rows):
            holes = [a.name for i, a in active if row[i] is MISSING]
            if holes:
                report.affected.extend((rid, name) for name in holes)
            else:
                keep_rows.append(row)
                keep_ids.append(rid)
        return Dataset(meta, keep_rows, keep_ids), report

    new_meta = meta.copy()
    fillers = _build_fillers(d, strategy, constant, active, new_meta)
    new_rows = []
    for rid, row in zip(d.row_ids, d.rows):
        new_row = list(row)
        for i, attr in active:
            if new_row[i] is MISSING:
                new_row[i] = fillers(rid, i, attr)
                report.affected.append((rid, attr.name))
        new_rows.append(new_row)
    out = Dataset(new_meta, new_rows, list(d.row_ids))
    out.validate()
    return out, report


def _build_fillers(d, strategy, constant, active, new_meta):
    meta = d.metadata
    if strategy == GLOBAL_CONSTANT:
        if constant is None:
            raise PreprocessError("global_constant strategy needs a constant")

        def fill(rid, i, attr):
            if attr.kind == CONTINUOUS:
                try:
                    return float(constant)
                except (TypeError, ValueError):
                    raise PreprocessError(
                        f"constant {constant!r} is not numeric, needed for {attr.name!r}"
                    ) from None
            token = str(constant)
            domain = new_meta.attributes[i].domain
            if domain and token not in domain:
                domain.append(token)
            return token

        return fill

    if strategy == MEAN_OR_MODE:
        cache = {}

        def fill(rid, i, attr):
            if i not in cache:
                cache[i] = _column_filler(d.column_values(attr.name), attr)
            return cache[i]

        return fill

    if strategy == CLASS_CONDITIONAL:
        if meta.class_attribute is None:
            raise PreprocessError("class_conditional imputation needs a class attribute")
        class_col = d.column_values(meta.class_attribute)
        by_id = dict(zip(d.row_ids, class_col))
        cache = {}

        def fill(rid, i, attr):
            label = by_id[rid]
            if label is MISSING:
                raise PreprocessError(f"row {rid}: class value is missing")
            key = (i, label)
            if key not in cache:
                values = [
                    row[i]
                    for row, cls in zip(d.rows, class_col)
                    if cls == label
                ]
                cache[key] = _column_filler(values, attr)
            return cache[key]

        return fill

    raise PreprocessError(f"unknown imputation strategy {strategy!r}")


def _column_filler(values, attr):
    present = [v for v in values if v is not MISSING]
    if not present:
        raise PreprocessError(f"attribute {attr.name!r}: no values to impute from")
    if attr.kind == CONTINUOUS:
        return sum(present) / len(present)
    counts = {}
    for token in present:
        counts[token] = counts.get(token, 0) + 1
    order = attr.domain if attr.domain else list(dict.fromkeys(present))
    # Mode; ties go to the token earliest in domain order, for determinism.
    return max(order, key=lambda t: (counts.get(t, 0), -order.index(t)))


# --------------------------------------------------------------------------
# Indexing
# --------------------------------------------------------------------------

@dataclass
class IndexedDataset:
    """Numeric view of a Dataset.

    ``values[i, j]`` holds the domain index for nominal cells and the (maybe
    normalized) number for continuous ones. Columns of skipped attributes
    are null for every row; NaN inside an active column marks a missing
    cell. Projection refuses data with remaining missing cells, so callers
    resolve them first via impute_missing.
    """

    metadata: Metadata
    values: np.ndarray
    row_ids: list[int]
    norm_params: dict[str, NormalizationParams] = field(default_factory=dict)

    @property
    def continuous_mask(self) -> np.ndarray:
        return np.array(
            [a.kind == CONTINUOUS and not a.skip for a in self.metadata.attributes], dtype=bool
        )

    @property
    def nominal_mask(self) -> np.ndarray:
        return np.array(
            [a.kind == NOMINAL and not a.skip for a in self.metadata.attributes], dtype=bool
        )

    @property
    def active_mask(self) -> np.ndarray:
        return np.array([not a.skip for a in self.metadata.attributes], dtype=bool)

    def missing_row_ids(self) -> list[int]:
        holes = np.isnan(self.values[:, self.active_mask]).any(axis=1)
        return [rid for rid, bad in zip(self.row_ids, holes) if bad]

    def subset(self, keep_ids) -> "IndexedDataset":
        keep = set(keep_ids)
        positions = [i for i, rid in enumerate(self.row_ids) if rid in keep]
        return IndexedDataset(
            self.metadata,
            self.values[positions],
            [self.row_ids[i] for i in positions],
            self.norm_params,
        )


def index_dataset(d: Dataset, znorm: bool = False, variant: str = "sigma") -> IndexedDataset:
    """Encode ``d`` as one float matrix (see IndexedDataset).

    With ``znorm`` every non-constant continuous column is z-normalized and
    the parameters recorded; a zero-variance column is left unscaled with a
    PreprocessWarning rather than failing the whole run.
    """
    d.validate()
    meta = d.metadata
    n, p = d.n_rows, meta.p
    values = np.full((n, p), np.nan)
    norm_params = {}

    for j, attr in enumerate(meta.attributes):
        if attr.skip:
            continue  # stays null
        col = [row[j] for row in d.rows]
        if attr.kind == NOMINAL:
            index_of = {token: k for k, token in enumerate(attr.domain)}
            for i, cell in enumerate(col):
                if cell is not MISSING:
                    values[i, j] = index_of[cell]
        else:
            if znorm:
                present = [v for v in col if v is not MISSING]
                if present:
                    stats = column_stats_of(col)
                    if _z_denominator(stats, variant) > 0.0:
                        col, params = z_normalize(col, stats, variant)
                        norm_params[attr.name] = params
                    else:
                        warnings.warn(
                            f"attribute {attr.name!r}: zero variance, left unscaled",
                            PreprocessWarning,
                            stacklevel=2,
                        )
            for i, cell in enumerate(col):
                if cell is not MISSING:
                    values[i, j] = float(cell)

    return IndexedDataset(meta, values, list(d.row_ids), norm_params)
