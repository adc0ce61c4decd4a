"""Cost evaluation and the alternating closed-form update loop.

The model has K main clusters plus one noise cluster. Each point i carries a
certainty weight D_i in [0, 1]; its memberships t_i1..t_iK (main) and f_i
(noise) satisfy sum_j t_ij + f_i = 1. The objective is

    N = sum_i sum_j (1 - D_i) t_ij^m |x_i - c_j|^2  +  sum_i D_i f_i^m g_i

with the noise coefficient g_i = max(K - sum_j |x_i - c_j|^2, noise_floor).
High-certainty points buy main membership cheaply (the (1 - D_i) factor), so
they commit to clusters; isolated points find the noise term cheaper and end
up with dominant f_i. Minimizing N subject to the sum constraint yields
closed-form membership updates and weighted-mean centroid updates, iterated
until the cost change falls below ``stop_eps``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .certainty import CertaintyConfig, CertaintyVector, certainty
from .dataset import DataSet
from .errors import DegenerateWeightsError, NonFiniteCostError

# Certainty is clamped away from {0, 1} inside fit so the membership weights
# 1/((1-D) d^2) and 1/(D g) stay finite.
_CERT_CLAMP = 1e-6


@dataclass(frozen=True)
class NsConfig:
    """All algorithm parameters.

    ``fuzzifier`` is the exponent m > 1 on memberships; ``dist_floor`` floors
    squared distances before reciprocals; ``noise_floor`` floors the noise
    coefficient g; ``boundary_t`` is the labeling threshold handed to
    classify_points.
    """

    k: int
    fuzzifier: float = 2.0
    stop_eps: float = 1e-6
    max_iter: int = 300
    dist_floor: float = 1e-12
    noise_floor: float = 1e-6
    seed: int = 0
    boundary_t: float = 0.4
    certainty: CertaintyConfig = field(default_factory=CertaintyConfig)

    def __post_init__(self):
        if int(self.k) < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not self.fuzzifier > 1.0:
            raise ValueError(f"fuzzifier must be > 1, got {self.fuzzifier}")
        if not self.stop_eps > 0.0:
            raise ValueError(f"stop_eps must be positive, got {self.stop_eps}")
        if int(self.max_iter) < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not (self.dist_floor > 0.0 and self.noise_floor > 0.0):
            raise ValueError("dist_floor and noise_floor must be positive")
        if not 0.0 < self.boundary_t < 0.5:
            raise ValueError(f"boundary_t must lie in (0, 0.5), got {self.boundary_t}")


@dataclass
class NsState:
    """Optimizer state: memberships, centroids, and the fit trace."""

    t_mem: np.ndarray
    f_mem: np.ndarray
    centroids: np.ndarray
    cost_history: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    cert: CertaintyVector | None = None
    frozen_events: int = 0


def _sq_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _noise_coefficients(d2: np.ndarray, k: int, floor: float) -> np.ndarray:
    return np.maximum(k - d2.sum(axis=1), floor)


def _check_state_shapes(ds: DataSet, state: NsState, d_vec: CertaintyVector,
                        cfg: NsConfig) -> None:
    n, k = ds.n, cfg.k
    if state.t_mem.shape != (n, k):
        raise ValueError(f"t_mem shape {state.t_mem.shape} != ({n}, {k})")
    if state.f_mem.shape != (n,):
        raise ValueError(f"f_mem shape {state.f_mem.shape} != ({n},)")
    if state.centroids.shape != (k, ds.d):
        raise ValueError(f"centroids shape {state.centroids.shape} != ({k}, {ds.d})")
    if d_vec.values.shape != (n,):
        raise ValueError(f"certainty shape {d_vec.values.shape} != ({n},)")


def cost(ds: DataSet, state: NsState, d_vec: CertaintyVector, cfg: NsConfig) -> float:
    """Evaluate the objective N at the given state.

    The main term uses raw squared distances; only g is floored.
    """
    _check_state_shapes(ds, state, d_vec, cfg)
    m = cfg.fuzzifier
    cert = d_vec.values
    d2 = _sq_distances(ds.points, state.centroids)
    g = _noise_coefficients(d2, cfg.k, cfg.noise_floor)
    main = ((1.0 - cert)[:, None] * state.t_mem**m * d2).sum()
    noise = (cert * state.f_mem**m * g).sum()
    return float(main + noise)


def lambda_for_point(i: int, dists_sq, g_i: float, d_i: float, m: float = 2.0) -> float:
    """Constraint multiplier for one point.

    Returns the value lambda such that memberships proportional to
    (lambda / ((1-d_i) d_ij^2))^(1/(m-1)) for the main clusters and
    (lambda / (d_i g_i))^(1/(m-1)) for the noise cluster sum to exactly 1.
    For m = 2 this reduces to 1 / (sum_j 1/((1-d_i) d_ij^2) + 1/(d_i g_i)).

    Callers floor ``dists_sq`` and ``g_i`` beforehand; ``d_i`` must lie
    strictly inside (0, 1).
    """
    if not 0.0 < d_i < 1.0:
        raise ValueError(f"point {i}: certainty must lie in (0, 1), got {d_i}")
    d2 = np.asarray(dists_sq, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        w_main = 1.0 / ((1.0 - d_i) * d2)
        w_noise = 1.0 / (d_i * g_i)
        p = 1.0 / (m - 1.0)
        s = float((w_main**p).sum() + w_noise**p)
        lam = s ** (-(m - 1.0))
    if not (np.isfinite(s) and s > 0.0 and np.isfinite(lam)):
        raise DegenerateWeightsError(
            f"point {i}: membership weights degenerate (sum {s})")
    return float(lam)


def update_memberships(ds: DataSet, centroids: np.ndarray, d_vec: CertaintyVector,
                       cfg: NsConfig):
    """Closed-form membership update for every point given fixed centroids.

    Returns (t_mem, f_mem) with each row of [t_mem | f_mem] summing to 1.
    Computed in ratio form (the FCM trick extended with the noise column):

        t_ij = 1 / ( sum_l (a_ij/a_il)^(1/(m-1)) + (a_ij/b_i)^(1/(m-1)) )

    with prices a_ij = (1-D_i) d_ij^2 (floored) and b_i = D_i g_i, which keeps
    every denominator >= 1. Exact-certainty special cases: D_i = 1 gives the
    plain FCM row with f_i = 0; D_i = 0 gives f_i = 1 and a zero row.
    """
    points = ds.points
    if centroids.shape != (cfg.k, ds.d):
        raise ValueError(f"centroids shape {centroids.shape} != ({cfg.k}, {ds.d})")
    if not np.all(np.isfinite(centroids)):
        raise ValueError("centroids contain NaN or infinite values")
    cert = d_vec.values
    m = cfg.fuzzifier
    p = 1.0 / (m - 1.0)

    d2_raw = _sq_distances(points, centroids)
    d2 = np.maximum(d2_raw, cfg.dist_floor)
    g = _noise_coefficients(d2_raw, cfg.k, cfg.noise_floor)
    # prices: what one unit of membership costs at each destination
    safe_cert = np.clip(cert, _CERT_CLAMP, 1.0 - _CERT_CLAMP)
    a = (1.0 - safe_cert)[:, None] * d2                      # (n, K)
    b = safe_cert * g                                        # (n,)

    with np.errstate(over="ignore"):
        ratio_main = (a[:, :, None] / a[:, None, :]) ** p    # (n, K, K): a_ij / a_il
        ratio_noise = (a / b[:, None]) ** p                  # (n, K)
        t = 1.0 / (ratio_main.sum(axis=2) + ratio_noise)
        f = 1.0 / (((b[:, None] / a) ** p).sum(axis=1) + 1.0)

    exact_one = cert >= 1.0
    if exact_one.any():
        fcm = 1.0 / ((d2[exact_one][:, :, None] / d2[exact_one][:, None, :]) ** p).sum(axis=2)
        t[exact_one] = fcm
        f[exact_one] = 0.0
    exact_zero = cert <= 0.0
    if exact_zero.any():
        t[exact_zero] = 0.0
        f[exact_zero] = 1.0

    return t, f


def _farthest_point_seeds(points: np.ndarray, cert: np.ndarray, k: int) -> np.ndarray:
    """Deterministic spread seeding: argmax of certainty-weighted distance.

    The first seed is the most certain point (lowest index on ties); each
    further seed maximizes squared certainty-scaled distance (cert * dist)^2
    to the nearest existing seed. Remote low-certainty points lose to dense
    cores, and chosen seeds repel each other, so every dense region gets a
    seed before any gets two.
    """
    picked = np.empty((k, points.shape[1]))
    weight = cert * cert
    score = cert.copy()
    for j in range(k):
        idx = int(np.argmax(score))
        picked[j] = points[idx]
        gap = points - points[idx]
        d2 = np.einsum("nd,nd->n", gap, gap)
        score = np.minimum(score, weight * d2) if j else weight * d2
        score[idx] = -np.inf
    return picked


def _centroid_update(ds: DataSet, t_mem: np.ndarray, f_mem: np.ndarray,
                     d_vec: CertaintyVector, cfg: NsConfig,
                     centroids: np.ndarray | None = None):
    """Weighted-mean centroid update; returns (new_centroids, frozen_count)."""
    points = ds.points
    cert = d_vec.values
    m = cfg.fuzzifier
    wt = (1.0 - cert)[:, None] * t_mem**m                    # (n, K)
    wn = cert * f_mem**m                                     # (n,)
    if centroids is not None:
        # Noise only pulls on centroids where g is off its floor: the floored
        # branch of g is constant in C, so its derivative contributes nothing.
        d2 = _sq_distances(points, centroids)
        active = (cfg.k - d2.sum(axis=1)) > cfg.noise_floor
        wn = wn * active
    signed = wt - wn[:, None]
    denom = signed.sum(axis=0)                               # (K,)
    num = signed.T @ points                                  # (K, d)

    frozen = denom <= cfg.noise_floor
    new = np.empty((cfg.k, ds.d))
    ok = ~frozen
    new[ok] = num[ok] / denom[ok, None]
    if frozen.any():
        if centroids is not None:
            new[frozen] = centroids[frozen]
        else:
            # No previous centroids to hold, so the signed weighting is
            # degenerate at the start: with memberships near uniform the
            # denominator goes negative as soon as most points are certain,
            # and any global weighted mean would drop every centroid into
            # the middle of the data, where the noise term's repulsion can
            # overpower the (1 - D)-damped cluster pull and either deadlock
            # the update or catapult centroids out of the data entirely.
            # Seed instead by certainty-weighted farthest-point traversal:
            # start at the most certain point, then repeatedly take the
            # point maximizing certainty times squared distance to the
            # nearest seed. Certain cores win over remote noise, and the
            # spread keeps early noise repulsion far below cluster pull.
            new = _farthest_point_seeds(points, cert, cfg.k)
    return new, int(frozen.sum())


def update_centroids(ds: DataSet, t_mem: np.ndarray, f_mem: np.ndarray,
                     d_vec: CertaintyVector, cfg: NsConfig,
                     centroids: np.ndarray | None = None) -> np.ndarray:
    """Signed-weight mean update for every centroid.

    C_j = sum_i w_ij x_i / sum_i w_ij with w_ij = (1-D_i) t_ij^m - D_i f_i^m.
    When the previous ``centroids`` are given, the noise part of the weight is
    dropped for points whose noise coefficient g sits on its floor (where the
    cost no longer depends on C), and any cluster whose weight sum falls to
    ``noise_floor`` or below keeps its previous centroid (frozen fallback).
    """
    new, _ = _centroid_update(ds, t_mem, f_mem, d_vec, cfg, centroids)
    return new


def analytic_gradients(ds: DataSet, state: NsState, d_vec: CertaintyVector,
                       cfg: NsConfig, lam: np.ndarray | None = None):
    """Exact partial derivatives of the implemented cost.

    Returns (dN/dT (n,K), dN/dF (n,), dN/dC (K,d)). When ``lam`` (one
    multiplier per point, as produced by lambda_for_point) is supplied, the
    membership gradients include the Lagrange term, i.e. m*lam is subtracted
    — with the exponent m on memberships, that is the multiplier value which
    vanishes at the constrained optimum. The centroid gradient accounts for
    the g floor: where g is floored it is locally constant in C, so the noise
    term contributes nothing there.
    """
    _check_state_shapes(ds, state, d_vec, cfg)
    points = ds.points
    cert = d_vec.values
    m = cfg.fuzzifier
    t, f = state.t_mem, state.f_mem
    d2 = _sq_distances(points, state.centroids)
    g_raw = cfg.k - d2.sum(axis=1)
    g = np.maximum(g_raw, cfg.noise_floor)

    gt = m * (1.0 - cert)[:, None] * t ** (m - 1.0) * d2
    gf = m * cert * f ** (m - 1.0) * g
    if lam is not None:
        lam = np.asarray(lam, dtype=float)
        gt = gt - m * lam[:, None]
        gf = gf - m * lam

    active = g_raw > cfg.noise_floor
    signed = (1.0 - cert)[:, None] * t**m - (cert * f**m * active)[:, None]
    gc = -2.0 * (signed.T @ points - signed.sum(axis=0)[:, None] * state.centroids)
    return gt, gf, gc


def fit(ds: DataSet, cfg: NsConfig, on_iteration=None) -> NsState:
    """Run the alternating optimization to convergence.

    Memberships start uniform-random (rows normalized to sum 1), certainty is
    computed once and clamped into [1e-6, 1-1e-6], and the initial centroids
    are derived from the initial memberships. Each iteration recomputes
    memberships from the current centroids, then centroids from the new
    memberships, then the cost; the loop stops when |dN| < stop_eps or at
    max_iter. Deterministic for a fixed seed.

    ``on_iteration(iteration, t_mem, f_mem, centroids)`` is called after each
    iteration when provided (used by verification harnesses).
    """
    n, k = ds.n, cfg.k
    if n <= k:
        raise ValueError(f"need more points than clusters: n={n}, k={k}")

    cert_raw = certainty(ds, cfg.certainty, k)
    cert = CertaintyVector(
        values=np.clip(cert_raw.values, _CERT_CLAMP, 1.0 - _CERT_CLAMP),
        eps=cert_raw.eps)

    rng = np.random.default_rng(cfg.seed)
    raw = np.maximum(rng.random((n, k + 1)), 1e-12)
    raw /= raw.sum(axis=1, keepdims=True)
    t, f = raw[:, :k].copy(), raw[:, k].copy()

    centroids, frozen_events = _centroid_update(ds, t, f, cert, cfg, None)
    history: list[float] = []
    prev = None
    converged = False
    iterations = 0
    for it in range(1, cfg.max_iter + 1):
        iterations = it
        t, f = update_memberships(ds, centroids, cert, cfg)
        centroids, n_frozen = _centroid_update(ds, t, f, cert, cfg, centroids)
        frozen_events += n_frozen
        state = NsState(t_mem=t, f_mem=f, centroids=centroids)
        value = cost(ds, state, cert, cfg)
        if not np.isfinite(value):
            raise NonFiniteCostError(it, value)
        history.append(value)
        if on_iteration is not None:
            on_iteration(it, t, f, centroids)
        if prev is not None and abs(value - prev) < cfg.stop_eps:
            converged = True
            break
        prev = value

    return NsState(t_mem=t, f_mem=f, centroids=centroids, cost_history=history,
                   iterations=iterations, converged=converged, cert=cert,
                   frozen_events=frozen_events)
