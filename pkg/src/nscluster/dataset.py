"""Dataset container, CSV I/O, normalization, and synthetic scatter generation."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CsvParseError, EmptyDatasetError, InvalidSpecError

# Group labels assigned by gen_scatter to non-cluster points.
BOUNDARY_GROUP = -1
OUTLIER_GROUP = -2

# Offsets used for deterministic cluster layouts, paired so that any even
# prefix sums to zero (keeps generated clusters centered on their centers).
_HALF_DIAG = math.sqrt(0.5)
_RING = (
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (_HALF_DIAG, _HALF_DIAG),
    (-_HALF_DIAG, -_HALF_DIAG),
    (_HALF_DIAG, -_HALF_DIAG),
    (-_HALF_DIAG, _HALF_DIAG),
)


class NormalizationMode(enum.Enum):
    NONE = "none"
    MINMAX = "minmax"
    ZSCORE = "zscore"


class DataSet:
    """Immutable n x d point matrix with optional integer labels.

    Args:
        points: array-like of shape (n, d); all values must be finite.
        labels: optional length-n integer class identifiers.
        feature_names: optional d column names.
        name: dataset name used in reports.
        label_name: column name used for labels when exporting.
    """

    def __init__(self, points, labels=None, feature_names=None, name="dataset",
                 label_name="label"):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise ValueError(f"points must be 2-d, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise EmptyDatasetError(f"need at least one row and one column, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain NaN or infinite values")
        pts.setflags(write=False)
        self.points = pts
        if labels is not None:
            lab = np.array(labels, dtype=int)
            if lab.shape != (pts.shape[0],):
                raise ValueError(
                    f"labels length {lab.shape} does not match n={pts.shape[0]}")
            lab.setflags(write=False)
        else:
            lab = None
        self.labels = lab
        if feature_names is not None:
            feature_names = tuple(str(f) for f in feature_names)
            if len(feature_names) != pts.shape[1]:
                raise ValueError(
                    f"{len(feature_names)} feature names for d={pts.shape[1]}")
        self.feature_names = feature_names
        self.name = str(name)
        self.label_name = str(label_name)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        lab = "labeled" if self.labels is not None else "unlabeled"
        return f"DataSet({self.name!r}, n={self.n}, d={self.d}, {lab})"

    def column_names(self):
        """Feature names, generated as x1..xd when none were provided."""
        if self.feature_names is not None:
            return list(self.feature_names)
        return [f"x{j + 1}" for j in range(self.d)]


def _parse_labels(raw_cells):
    """Turn raw label strings into integers.

    Numeric integral labels are kept as-is; anything else (class strings such
    as "g"/"b", or non-integral numbers) is factorized in first-appearance
    order. Either way the coding is deterministic.
    """
    values = []
    numeric = True
    for cell in raw_cells:
        try:
            v = float(cell)
        except ValueError:
            numeric = False
            break
        if not v.is_integer():
            numeric = False
            break
        values.append(int(v))
    if numeric:
        return values
    seen: dict[str, int] = {}
    out = []
    for cell in raw_cells:
        key = cell.strip()
        if key not in seen:
            seen[key] = len(seen)
        out.append(seen[key])
    return out


def load_csv(path, label_column=None, has_header=False, name=None) -> DataSet:
    """Load a comma-delimited numeric dataset.

    Args:
        path: CSV file path (UTF-8, "." decimal point).
        label_column: column holding class labels — a name (requires a header)
            or a 0-based index; None keeps every column as a feature.
        has_header: whether the first row holds column names.
        name: dataset name; defaults to the file stem.

    Raises:
        FileNotFoundError: missing file.
        CsvParseError: non-numeric feature cell or ragged row; carries the
            0-based data-row and column indices.
        EmptyDatasetError: no data rows.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except FileNotFoundError:
        raise FileNotFoundError(f"no such file: {path}") from None

    header = None
    if has_header:
        if not rows:
            raise EmptyDatasetError(f"{path} has no rows")
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
    if not rows:
        raise EmptyDatasetError(f"{path} has no data rows")

    width = len(header) if header is not None else len(rows[0])
    label_idx = None
    label_name = "label"
    if label_column is not None:
        if isinstance(label_column, str):
            if header is None:
                raise ValueError("label column by name requires has_header=True")
            if label_column not in header:
                raise ValueError(
                    f"label column {label_column!r} not in header {header}")
            label_idx = header.index(label_column)
            label_name = label_column
        else:
            label_idx = int(label_column)
            if not 0 <= label_idx < width:
                raise IndexError(
                    f"label column index {label_idx} out of range for {width} columns")
            if header is not None:
                label_name = header[label_idx]

    features = []
    raw_labels = []
    for r, row in enumerate(rows):
        if len(row) != width:
            raise CsvParseError(
                r, min(len(row), width),
                f"row {r} has {len(row)} cells, expected {width}")
        vals = []
        for c, cell in enumerate(row):
            if c == label_idx:
                raw_labels.append(cell)
                continue
            try:
                vals.append(float(cell))
            except ValueError:
                raise CsvParseError(r, c) from None
        features.append(vals)

    labels = _parse_labels(raw_labels) if label_idx is not None else None
    feature_names = None
    if header is not None:
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
    if name is None:
        name = str(path).rsplit("/", 1)[-1]
        name = name[:-4] if name.endswith(".csv") else name
    return DataSet(features, labels=labels, feature_names=feature_names,
                   name=name, label_name=label_name)


def write_csv(ds: DataSet, path) -> None:
    """Write a DataSet as CSV with a header; numeric round trip is exact."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = ds.column_names()
        if ds.labels is not None:
            header = header + [ds.label_name]
        writer.writerow(header)
        for i in range(ds.n):
            row = [repr(float(v)) for v in ds.points[i]]
            if ds.labels is not None:
                row.append(str(int(ds.labels[i])))
            writer.writerow(row)


def normalize(ds: DataSet, mode: NormalizationMode, drop_constant=False) -> DataSet:
    """Rescale features column-wise.

    MINMAX maps each feature to [0, 1]; ZSCORE to mean 0 and population
    standard deviation 1 (divide by n). Constant features map to all-zeros
    under either mode rather than dividing by zero. ``drop_constant`` removes
    constant columns entirely before scaling.
    """
    if not isinstance(mode, NormalizationMode):
        mode = NormalizationMode(mode)
    pts = np.array(ds.points, dtype=float)
    names = ds.column_names()
    if drop_constant:
        keep = pts.max(axis=0) != pts.min(axis=0)
        if not keep.any():
            raise EmptyDatasetError("all columns are constant; nothing left to keep")
        pts = pts[:, keep]
        names = [nm for nm, k in zip(names, keep) if k]

    if mode is NormalizationMode.MINMAX:
        lo = pts.min(axis=0)
        span = pts.max(axis=0) - lo
        safe = np.where(span == 0.0, 1.0, span)
        pts = np.where(span == 0.0, 0.0, (pts - lo) / safe)
    elif mode is NormalizationMode.ZSCORE:
        mean = pts.mean(axis=0)
        std = pts.std(axis=0)  # population std
        safe = np.where(std == 0.0, 1.0, std)
        pts = np.where(std == 0.0, 0.0, (pts - mean) / safe)

    return DataSet(pts, labels=ds.labels, feature_names=names, name=ds.name,
                   label_name=ds.label_name)


@dataclass(frozen=True)
class ScatterSpec:
    """Recipe for a synthetic 2-d (or d-dim) scatter dataset.

    Cluster points are placed on a deterministic zero-sum ring around each
    center (radius ``cluster_spread``), plus uniform jitter in
    [-jitter, jitter] per coordinate. Boundary and outlier points are placed
    exactly at the given coordinates, after the cluster blocks, in order.
    """

    cluster_centers: tuple
    points_per_cluster: tuple
    boundary_points: tuple = ()
    outlier_points: tuple = ()
    jitter: float = 0.0
    seed: int = 0
    cluster_spread: float = 0.0
    name: str = "scatter"

    def __post_init__(self):
        centers = tuple(tuple(float(x) for x in c) for c in self.cluster_centers)
        counts = tuple(int(c) for c in self.points_per_cluster)
        object.__setattr__(self, "cluster_centers", centers)
        object.__setattr__(self, "points_per_cluster", counts)
        object.__setattr__(self, "boundary_points",
                           tuple(tuple(float(x) for x in p) for p in self.boundary_points))
        object.__setattr__(self, "outlier_points",
                           tuple(tuple(float(x) for x in p) for p in self.outlier_points))
        if not centers:
            raise InvalidSpecError("need at least one cluster center")
        if len(counts) != len(centers):
            raise InvalidSpecError(
                f"{len(counts)} cluster counts for {len(centers)} centers")
        if any(c < 1 for c in counts):
            raise InvalidSpecError("points_per_cluster entries must be >= 1")
        dim = len(centers[0])
        for p in centers + self.boundary_points + self.outlier_points:
            if len(p) != dim:
                raise InvalidSpecError(f"point {p} is not {dim}-dimensional")
        if not (self.jitter >= 0.0 and math.isfinite(self.jitter)):
            raise InvalidSpecError("jitter must be a finite non-negative real")
        if not (self.cluster_spread >= 0.0 and math.isfinite(self.cluster_spread)):
            raise InvalidSpecError("cluster_spread must be a finite non-negative real")


def _ring_offsets(count: int, spread: float, dim: int) -> np.ndarray:
    """Deterministic zero-sum offsets for one cluster."""
    out = np.zeros((count, dim))
    if spread == 0.0 or dim < 2:
        return out
    start = 0
    if count % 2 == 1:
        start = 1  # odd counts put the first point on the center itself
    for i in range(start, count):
        j = i - start
        radius = spread * (1 + j // len(_RING))
        dx, dy = _RING[j % len(_RING)]
        out[i, 0] = radius * dx
        out[i, 1] = radius * dy
    return out


def gen_scatter(spec: ScatterSpec) -> DataSet:
    """Generate the dataset described by ``spec``.

    Deterministic for a fixed seed. Points are ordered cluster-by-cluster,
    then boundary points, then outliers; labels record the generating group
    (cluster index, BOUNDARY_GROUP, OUTLIER_GROUP).
    """
    rng = np.random.default_rng(spec.seed)
    dim = len(spec.cluster_centers[0])
    blocks = []
    labels = []
    for ci, (center, count) in enumerate(zip(spec.cluster_centers,
                                             spec.points_per_cluster)):
        block = np.tile(np.array(center, dtype=float), (count, 1))
        block += _ring_offsets(count, spec.cluster_spread, dim)
        if spec.jitter > 0.0:
            block += rng.uniform(-spec.jitter, spec.jitter, size=(count, dim))
        blocks.append(block)
        labels.extend([ci] * count)
    if spec.boundary_points:
        blocks.append(np.array(spec.boundary_points, dtype=float))
        labels.extend([BOUNDARY_GROUP] * len(spec.boundary_points))
    if spec.outlier_points:
        blocks.append(np.array(spec.outlier_points, dtype=float))
        labels.extend([OUTLIER_GROUP] * len(spec.outlier_points))
    points = np.vstack(blocks)
    return DataSet(points, labels=labels, name=spec.name, label_name="group")
