"""Per-point certainty scores from epsilon-neighborhood density.

A point surrounded by at least ``tr`` points (itself included) within radius
``eps`` is fully certain (score ``alpha``); sparser points are scored
proportionally to their neighbor count, so isolated points land near 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import DataSet
from .errors import InvalidSpecError

DEFAULT_EPS_QUANTILE = 0.1


@dataclass(frozen=True)
class CertaintyConfig:
    """Neighborhood parameters.

    Exactly one of ``eps`` (explicit radius) or ``eps_quantile`` may be set;
    with neither, the radius defaults to the 0.1 quantile of the pairwise
    distance distribution of the dataset it is applied to.
    """

    eps: float | None = None
    eps_quantile: float | None = None
    tr: int = 4
    alpha: float = 0.95

    def __post_init__(self):
        if self.eps is not None and self.eps_quantile is not None:
            raise InvalidSpecError("set either eps or eps_quantile, not both")
        if self.eps is not None and not (self.eps > 0 and math.isfinite(self.eps)):
            raise InvalidSpecError(f"eps must be a positive real, got {self.eps}")
        if self.eps_quantile is not None and not 0.0 < self.eps_quantile < 1.0:
            raise InvalidSpecError(
                f"eps_quantile must lie in (0, 1), got {self.eps_quantile}")
        if int(self.tr) < 1:
            raise InvalidSpecError(f"tr must be >= 1, got {self.tr}")
        if not 0.0 < self.alpha <= 1.0:
            raise InvalidSpecError(f"alpha must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class CertaintyVector:
    """Certainty per point (all in [0, 1]) plus the radius actually used."""

    values: np.ndarray
    eps: float


def step_indicator(a: float, b: float) -> int:
    """1 if a <= b else 0."""
    return 1 if a <= b else 0


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))


def in_circle(i: int, ds: DataSet, eps: float) -> int:
    """Count points within Euclidean distance ``eps`` of point i, itself included."""
    if not 0 <= i < ds.n:
        raise IndexError(f"point index {i} out of range for n={ds.n}")
    diff = ds.points - ds.points[i]
    dist = np.sqrt(np.einsum("nd,nd->n", diff, diff))
    return int(np.count_nonzero(dist <= eps))


def resolve_eps(ds: DataSet, cfg: CertaintyConfig) -> float:
    """Turn the configured radius policy into a concrete positive radius.

    Quantile policy: the q-quantile of the upper-triangle pairwise distances.
    If that quantile is 0 (coincident points), the smallest positive pairwise
    distance is used instead — or 1.0 when every point coincides — so the
    radius is always positive.
    """
    if cfg.eps is not None:
        return float(cfg.eps)
    q = cfg.eps_quantile if cfg.eps_quantile is not None else DEFAULT_EPS_QUANTILE
    if ds.n < 2:
        raise ValueError("quantile eps policy needs at least 2 points")
    dist = _pairwise_distances(ds.points)
    upper = dist[np.triu_indices(ds.n, k=1)]
    eps = float(np.quantile(upper, q))
    if eps <= 0.0:
        positive = upper[upper > 0.0]
        eps = float(positive.min()) if positive.size else 1.0
    return eps


def certainty(ds: DataSet, cfg: CertaintyConfig, k: int) -> CertaintyVector:
    """Score every point.

    Points with at least ``tr`` neighbors within ``eps`` get ``alpha``;
    the rest get count/(n/k), clamped into [0, 1] (the ratio can exceed 1
    when n/k is small).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    eps = resolve_eps(ds, cfg)
    dist = _pairwise_distances(ds.points)
    counts = (dist <= eps).sum(axis=1)
    sparse = counts * (k / ds.n)
    values = np.where(counts >= cfg.tr, cfg.alpha, np.minimum(sparse, cfg.alpha))
    values = np.clip(values, 0.0, 1.0)
    values.setflags(write=False)
    return CertaintyVector(values=values, eps=eps)
