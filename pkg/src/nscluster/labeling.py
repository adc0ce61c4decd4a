"""Turn a converged state into per-point verdicts: main, boundary, or outlier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .optimizer import NsState


@dataclass(frozen=True)
class PointVerdict:
    """One point's classification.

    ``kind`` is "main" (with ``cluster`` set), "boundary" (with ``pair`` set,
    ascending cluster indices), or "outlier". ``top_memberships`` holds the
    values that justified the verdict.
    """

    kind: str
    cluster: int | None = None
    pair: tuple[int, int] | None = None
    top_memberships: tuple = ()

    def text(self) -> str:
        """Display form with 1-based cluster numbers: C1, boundary(1,2), outlier."""
        if self.kind == "main":
            return f"C{self.cluster + 1}"
        if self.kind == "boundary":
            return f"boundary({self.pair[0] + 1},{self.pair[1] + 1})"
        return "outlier"


def classify_points(state: NsState, boundary_t: float = 0.4) -> list[PointVerdict]:
    """Classify every point, in precedence order:

    (a) Outlier when the noise membership exceeds every main membership;
    (b) else Boundary(j, k) when the two largest main memberships both lie
        strictly inside (boundary_t, 1 - boundary_t);
    (c) else Main(argmax), ties broken toward the lowest cluster index.
    """
    if not 0.0 < boundary_t < 0.5:
        raise ValueError(f"boundary_t must lie in (0, 0.5), got {boundary_t}")
    t, f = state.t_mem, state.f_mem
    if t.ndim != 2 or f.shape != (t.shape[0],):
        raise ValueError(f"inconsistent membership shapes {t.shape} / {f.shape}")
    n, k = t.shape
    lo, hi = boundary_t, 1.0 - boundary_t

    verdicts = []
    for i in range(n):
        row = t[i]
        best = int(np.argmax(row))
        if f[i] > row[best]:
            verdicts.append(PointVerdict(kind="outlier",
                                         top_memberships=(float(f[i]),)))
            continue
        if k >= 2:
            order = np.argsort(-row, kind="stable")
            j1, j2 = int(order[0]), int(order[1])
            v1, v2 = float(row[j1]), float(row[j2])
            if lo < v1 < hi and lo < v2 < hi:
                a, b = sorted((j1, j2))
                verdicts.append(PointVerdict(kind="boundary", pair=(a, b),
                                             top_memberships=(float(row[a]),
                                                              float(row[b]))))
                continue
        verdicts.append(PointVerdict(kind="main", cluster=best,
                                     top_memberships=(float(row[best]),)))
    return verdicts


def hard_labels(state: NsState) -> np.ndarray:
    """argmax over the main memberships; noise is ignored by design."""
    return np.argmax(state.t_mem, axis=1)
