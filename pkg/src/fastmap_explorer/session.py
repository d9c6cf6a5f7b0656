"""Interactive session state: one dataset, its caches, and a selection.

The projection and the numeric encoding are caches over the dataset; any
edit to rows or metadata bumps the session version and invalidates them, so
downstream requests can never read results computed from stale data.
Selection lives in projection coordinates (the first two axes), not in
pixels; the UI maps between the two with the same viewport transform the
server exposes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dataset import CONTINUOUS, MISSING, Dataset, format_number
from .fastmap import Projection, ProjectionOptions, project_dataset
from . import preprocess
from .preprocess import IndexedDataset, impute_missing, index_dataset


class SessionError(Exception):
    pass


@dataclass
class SelectionPolygon:
    """Closed free-form curve, given as its vertices in projection space."""

    points: list[tuple[float, float]]

    def validate(self):
        if len(self.points) < 3:
            raise SessionError("selection polygon needs at least 3 vertices")


def point_in_polygon(x: float, y: float, points) -> bool:
    """Even-odd containment with a half-open edge convention: for an
    axis-aligned box, left and bottom edges count as inside, right and top
    as outside, so tiled polygons never claim a point twice."""
    inside = False
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            t = (y - y1) / (y2 - y1)
            if x < x1 + t * (x2 - x1):
                inside = not inside
    return inside


@dataclass
class RenderHints:
    """Display options the service stores for the client (circle radius in
    pixels and the alpha-blending level)."""

    point_radius: int = 4
    alpha: float = 0.6

    def validate(self):
        if self.point_radius < 1:
            raise SessionError("point radius must be >= 1")
        if not (0.0 < self.alpha <= 1.0):
            raise SessionError("alpha must be in (0, 1]")


@dataclass
class ProjectRequest:
    """Everything one projection run needs: the algorithm options plus the
    non-destructive preprocessing applied on the way in."""

    options: ProjectionOptions = field(default_factory=ProjectionOptions)
    znorm: str = "none"  # none | sigma | mad
    impute: str | None = None  # None | drop | mean | class-mean | const
    impute_constant: str | None = None


_session_counter = itertools.count(1)


class Session:
    def __init__(self, dataset: Dataset, session_id: str | None = None):
        dataset.validate()
        self.id = session_id or f"s{next(_session_counter)}"
        self.dataset = dataset
        self.selection: set[int] = set()
        self.hints = RenderHints()
        self.version = 0
        self._indexed: IndexedDataset | None = None
        self._indexed_version = -1
        self._indexed_key = None
        self.projection: Projection | None = None
        self._projection_version = -1
        self.last_project_request: ProjectRequest | None = None

    # -- mutation and cache discipline ------------------------------------

    def _mutated(self):
        self.version += 1
        self.selection &= set(self.dataset.row_ids)

    def replace_dataset(self, dataset: Dataset):
        dataset.validate()
        self.dataset = dataset
        self._mutated()

    def fresh_projection(self) -> Projection:
        if self.projection is None:
            raise SessionError("no projection computed yet")
        if self._projection_version != self.version:
            raise SessionError("projection is stale; re-project first")
        return self.projection

    # -- pipeline ----------------------------------------------------------

    def indexed(self, znorm: str = "none") -> IndexedDataset:
        key = znorm
        if self._indexed is None or self._indexed_version != self.version or self._indexed_key != key:
            use_z = znorm in ("sigma", "mad")
            self._indexed = index_dataset(self.dataset, znorm=use_z, variant=znorm if use_z else "sigma")
            self._indexed_version = self.version
            self._indexed_key = key
        return self._indexed

    def project(self, request: ProjectRequest) -> Projection:
        source = self.dataset
        if request.impute and request.impute != "none":
            source = _imputed(source, request.impute, request.impute_constant)
        use_z = request.znorm in ("sigma", "mad")
        indexed = index_dataset(source, znorm=use_z, variant=request.znorm if use_z else "sigma")
        self.projection = project_dataset(indexed, request.options)
        self._projection_version = self.version
        self.last_project_request = request
        return self.projection

    # -- selection and object operations -----------------------------------

    def apply_selection(self, polygons, mode: str = "replace") -> set[int]:
        """Select the objects whose projected point falls inside the filled
        union of the polygons; ``add`` unions with the current selection."""
        if mode not in ("replace", "add"):
            raise SessionError(f"unknown selection mode {mode!r}")
        projection = self.fresh_projection()
        polys = []
        for poly in polygons:
            poly = poly if isinstance(poly, SelectionPolygon) else SelectionPolygon(list(poly))
            poly.validate()
            polys.append(poly)
        hit = set()
        for rid, point in zip(projection.row_ids, projection.X):
            x = float(point[0])
            y = float(point[1]) if projection.k > 1 else 0.0
            if any(point_in_polygon(x, y, p.points) for p in polys):
                hit.add(rid)
        if mode == "add":
            self.selection |= hit
        else:
            self.selection = hit
        return set(self.selection)

    def crop(self) -> Dataset:
        """Keep only the selected objects; the next projection run sees just
        those rows. Row ids survive."""
        if not self.selection:
            raise SessionError("crop needs a non-empty selection")
        self.dataset = self.dataset.subset(self.selection)
        self.selection = set()
        self._mutated()
        return self.dataset

    def delete_selected(self) -> Dataset:
        """Drop the selected objects (the outlier-removal move)."""
        if not self.selection:
            raise SessionError("delete needs a non-empty selection")
        keep = [rid for rid in self.dataset.row_ids if rid not in self.selection]
        self.dataset = self.dataset.subset(keep)
        self.selection = set()
        self._mutated()
        return self.dataset


def _imputed(dataset: Dataset, strategy: str, constant) -> Dataset:
    mapping = {
        "drop": preprocess.DROP_ROW,
        "mean": preprocess.MEAN_OR_MODE,
        "class-mean": preprocess.CLASS_CONDITIONAL,
        "const": preprocess.GLOBAL_CONSTANT,
    }
    if strategy not in mapping:
        raise SessionError(f"unknown imputation strategy {strategy!r}")
    result, _ = impute_missing(dataset, mapping[strategy], constant=constant)
    return result


def hit_test(projection: Projection, cursor, threshold: float):
    """Nearest object within ``threshold`` of the cursor (projection
    coordinates); ties resolve to the lowest row id, misses to None."""
    if projection.n == 0:
        return None
    pts = projection.X[:, :2] if projection.k >= 2 else projection.X
    cur = np.asarray(cursor, dtype=float)[: pts.shape[1]]
    dists = np.sqrt(np.sum((pts - cur) ** 2, axis=1))
    best = dists.min()
    if best > threshold:
        return None
    candidates = [rid for rid, d in zip(projection.row_ids, dists) if d == best]
    return min(candidates)


@dataclass
class ViewportTransform:
    """Uniform-scale affine map from projection space into a pixel
    rectangle; screen y grows downward like a canvas."""

    scale: float
    tx: float
    ty: float

    def apply(self, x, y):
        return x * self.scale + self.tx, y * self.scale + self.ty

    def invert(self, sx, sy):
        return (sx - self.tx) / self.scale, (sy - self.ty) / self.scale


def viewport_transform(points, width: float, height: float, margin: float = 0.0):
    """Scale the bounding box of ``points`` (a Projection or an (N, 2)
    array) into the margin-inset viewport, preserving aspect and centering;
    a degenerate axis collapses to the center line. Returns
    (screen_points, transform)."""
    if width <= 2 * margin or height <= 2 * margin:
        raise SessionError("viewport smaller than twice the margin")
    if isinstance(points, Projection):
        points = points.X[:, :2]
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    avail_w, avail_h = width - 2 * margin, height - 2 * margin
    if pts.size == 0:
        transform = ViewportTransform(1.0, margin + avail_w / 2, margin + avail_h / 2)
        return pts.copy(), transform
    mins = pts.min(axis=0)
    extents = pts.max(axis=0) - mins
    factors = []
    if extents[0] > 0:
        factors.append(avail_w / extents[0])
    if extents[1] > 0:
        factors.append(avail_h / extents[1])
    scale = min(factors) if factors else 1.0
    tx = margin + (avail_w - scale * extents[0]) / 2 - scale * mins[0]
    ty = margin + (avail_h - scale * extents[1]) / 2 - scale * mins[1]
    transform = ViewportTransform(scale, tx, ty)
    screen = pts * scale + np.array([tx, ty])
    return screen, transform


def object_details(dataset: Dataset, row_id: int) -> list[tuple[str, str]]:
    """Attribute-value pairs of one object for hover inspection; skipped
    attributes stay hidden."""
    row = dataset.row_by_id(row_id)
    pairs = []
    for attr, cell in zip(dataset.metadata.attributes, row):
        if attr.skip:
            continue
        if cell is MISSING:
            text = attr.missing_token(dataset.metadata)
        elif attr.kind == CONTINUOUS:
            text = format_number(cell)
        else:
            text = cell
        pairs.append((attr.name, text))
    return pairs
