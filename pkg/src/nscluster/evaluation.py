"""Permutation-optimal accuracy scoring and the fuzzy c-means baseline."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .dataset import DataSet
from .labeling import hard_labels
from .optimizer import NsConfig, fit

_FCM_DIST_FLOOR = 1e-12
# exhaustive search is capped at this many injections; past it the assignment
# solver takes over regardless of the requested method
_MAX_INJECTIONS = 2_000_000


@dataclass(frozen=True)
class EvalReport:
    """Scoring result: best accuracy, the mapping that achieves it, and the
    confusion matrix (rows: predicted clusters, cols: truth classes, both in
    np.unique order)."""

    accuracy: float
    mapping: dict
    confusion: np.ndarray
    n_evaluated: int


@dataclass(frozen=True)
class FcmConfig:
    k: int
    fuzzifier: float = 2.0
    stop_eps: float = 1e-6
    max_iter: int = 300
    seed: int = 0

    def __post_init__(self):
        if int(self.k) < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not self.fuzzifier > 1.0:
            raise ValueError(f"fuzzifier must be > 1, got {self.fuzzifier}")
        if not self.stop_eps > 0.0:
            raise ValueError(f"stop_eps must be positive, got {self.stop_eps}")
        if int(self.max_iter) < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


def _n_injections(small: int, large: int) -> int:
    out = 1
    for i in range(small):
        out *= large - i
    return out


def accuracy(pred, truth, method: str = "auto") -> EvalReport:
    """Score predicted cluster ids against truth classes.

    The score is maximized over injective mappings from the smaller id set
    into the larger: exhaustive search when min(K, L) <= 8 (and the injection
    count is tractable), the rectangular assignment solver otherwise.
    ``method`` forces one path ("exhaustive" / "assignment") for cross-checks.
    """
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {truth.shape}")
    n = pred.size
    if n < 1:
        raise ValueError("need at least one point to score")

    up, pinv = np.unique(pred, return_inverse=True)
    ut, tinv = np.unique(truth, return_inverse=True)
    k, l = up.size, ut.size
    conf = np.zeros((k, l), dtype=int)
    np.add.at(conf, (pinv, tinv), 1)

    if method == "auto":
        small, large = min(k, l), max(k, l)
        use_exhaustive = small <= 8 and _n_injections(small, large) <= _MAX_INJECTIONS
    elif method == "exhaustive":
        use_exhaustive = True
    elif method == "assignment":
        use_exhaustive = False
    else:
        raise ValueError(f"unknown method {method!r}")

    if use_exhaustive:
        best, pairs = -1, []
        if k <= l:
            for perm in itertools.permutations(range(l), k):
                score = int(conf[np.arange(k), perm].sum())
                if score > best:
                    best, pairs = score, list(zip(range(k), perm))
        else:
            for perm in itertools.permutations(range(k), l):
                score = int(conf[perm, np.arange(l)].sum())
                if score > best:
                    best, pairs = score, list(zip(perm, range(l)))
    else:
        rows, cols = linear_sum_assignment(conf, maximize=True)
        best = int(conf[rows, cols].sum())
        pairs = list(zip(rows.tolist(), cols.tolist()))

    mapping = {int(up[r]): int(ut[c]) for r, c in pairs}
    return EvalReport(accuracy=best / n, mapping=mapping, confusion=conf,
                      n_evaluated=n)


def fcm_fit(ds: DataSet, cfg: FcmConfig):
    """Standard fuzzy c-means; returns (memberships (n,K), centroids (K,d)).

    Random row-normalized initial memberships, alternating centroid and
    membership updates, stop on |dJ| < stop_eps. Deterministic per seed.
    """
    n, k, m = ds.n, cfg.k, cfg.fuzzifier
    if n <= k:
        raise ValueError(f"need more points than clusters: n={n}, k={k}")
    points = ds.points
    p = 1.0 / (m - 1.0)

    rng = np.random.default_rng(cfg.seed)
    u = np.maximum(rng.random((n, k)), 1e-12)
    u /= u.sum(axis=1, keepdims=True)

    prev = None
    for _ in range(cfg.max_iter):
        um = u**m
        denom = np.maximum(um.sum(axis=0), _FCM_DIST_FLOOR)
        centroids = (um.T @ points) / denom[:, None]
        diff = points[:, None, :] - centroids[None, :, :]
        d2 = np.maximum(np.einsum("nkd,nkd->nk", diff, diff), _FCM_DIST_FLOOR)
        u = 1.0 / ((d2[:, :, None] / d2[:, None, :]) ** p).sum(axis=2)
        value = float((u**m * d2).sum())
        if prev is not None and abs(value - prev) < cfg.stop_eps:
            break
        prev = value
    return u, centroids


@dataclass(frozen=True)
class MethodScores:
    per_seed: tuple
    best: float
    mean: float


@dataclass(frozen=True)
class ComparisonRecord:
    dataset: str
    n: int
    d: int
    k: int
    seeds: tuple
    proposed: MethodScores
    fcm: MethodScores


def _scores(values) -> MethodScores:
    vals = tuple(float(v) for v in values)
    return MethodScores(per_seed=vals, best=max(vals),
                        mean=float(sum(vals) / len(vals)))


def compare(ds: DataSet, ns_cfg: NsConfig, fcm_cfg: FcmConfig,
            n_seeds: int = 10) -> ComparisonRecord:
    """Run both methods over ``n_seeds`` seeds and score each run.

    Seed i uses each config's base seed + i; results are merged in seed
    order, so the record is deterministic.
    """
    if ds.labels is None:
        raise ValueError("labels required: dataset has no ground truth")
    if n_seeds < 1:
        raise ValueError(f"n_seeds must be >= 1, got {n_seeds}")
    truth = ds.labels
    ours, base = [], []
    for i in range(n_seeds):
        state = fit(ds, replace(ns_cfg, seed=ns_cfg.seed + i))
        ours.append(accuracy(hard_labels(state), truth).accuracy)
        u, _ = fcm_fit(ds, replace(fcm_cfg, seed=fcm_cfg.seed + i))
        base.append(accuracy(np.argmax(u, axis=1), truth).accuracy)
    seeds = tuple(ns_cfg.seed + i for i in range(n_seeds))
    return ComparisonRecord(dataset=ds.name, n=ds.n, d=ds.d, k=ns_cfg.k,
                            seeds=seeds, proposed=_scores(ours),
                            fcm=_scores(base))
