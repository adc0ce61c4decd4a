"""Built-in synthetic scenario presets: x13, x37, x43.

Each preset pairs a scatter recipe with the run parameters it was designed
for. Geometry notes (all checked numerically in the test suite):

* cluster cores are dense rings, so every core point has >= tr neighbors
  within eps and gets certainty alpha;
* midpoints between cluster pairs also reach >= tr neighbors, so they get
  certainty alpha and split their membership between the two nearest
  clusters (the boundary pattern);
* outliers sit far enough that, after min-max scaling, their summed squared
  centroid distances exceed K (x13/x37), parking them on the noise-coefficient
  floor: their noise membership saturates near 1 and they stop influencing
  centroids;
* layouts are mirror-symmetric, so tied memberships are exact by symmetry,
  not by luck.

Presets tighten stop_eps/max_iter so fit lands on a machine-precision fixed
point (the stationarity checks need residuals far below the CLI defaults).
"""

from __future__ import annotations

from dataclasses import dataclass

from .certainty import CertaintyConfig
from .dataset import DataSet, NormalizationMode, ScatterSpec, gen_scatter
from .optimizer import NsConfig

_PRESET_STOP_EPS = 1e-15
_PRESET_MAX_ITER = 5000


@dataclass(frozen=True)
class Preset:
    """A scatter recipe plus the parameters the scenario was tuned for."""

    name: str
    spec: ScatterSpec
    k: int
    eps: float  # explicit neighborhood radius, in min-max-normalized space

    def dataset(self, seed: int | None = None, jitter: float | None = None) -> DataSet:
        spec = self.spec
        if seed is not None or jitter is not None:
            from dataclasses import replace
            spec = replace(spec,
                           seed=spec.seed if seed is None else seed,
                           jitter=spec.jitter if jitter is None else jitter)
        return gen_scatter(spec)

    def config(self, seed: int = 0, **overrides) -> NsConfig:
        fields = dict(
            k=self.k,
            stop_eps=_PRESET_STOP_EPS,
            max_iter=_PRESET_MAX_ITER,
            seed=seed,
            certainty=CertaintyConfig(eps=self.eps),
        )
        fields.update(overrides)
        return NsConfig(**fields)

    @property
    def normalize(self) -> NormalizationMode:
        return NormalizationMode.MINMAX


_X13 = Preset(
    name="x13",
    spec=ScatterSpec(
        cluster_centers=((0.0, 0.0), (10.0, 0.0)),
        points_per_cluster=(4, 4),
        boundary_points=((5.0, 0.0),),
        outlier_points=((-2.0, 14.7), (12.0, 14.7), (-2.0, 16.0), (12.0, 16.0)),
        jitter=0.0,
        cluster_spread=0.5,
        seed=0,
        name="x13",
    ),
    k=2,
    eps=0.375,
)

_X37 = Preset(
    name="x37",
    spec=ScatterSpec(
        cluster_centers=((0.0, 0.0), (10.0, 0.0), (20.0, 0.0)),
        points_per_cluster=(9, 9, 9),
        boundary_points=(
            (5.0, -0.8), (5.0, 0.0), (5.0, 0.8),
            (15.0, -0.8), (15.0, 0.0), (15.0, 0.8),
        ),
        outlier_points=((-2.0, 16.1), (22.0, 16.1), (-2.0, 18.0), (22.0, 18.0)),
        jitter=0.0,
        cluster_spread=0.6,
        seed=0,
        name="x37",
    ),
    k=3,
    eps=0.21,
)

_X43 = Preset(
    name="x43",
    spec=ScatterSpec(
        cluster_centers=((0.0, 0.0), (10.0, 0.0), (0.0, 10.0)),
        points_per_cluster=(12, 12, 12),
        boundary_points=((5.0, 0.0), (5.0, 5.0), (0.0, 5.0)),
        outlier_points=((19.5, 15.8), (15.8, 19.5), (19.5, 19.2), (19.2, 19.5)),
        jitter=0.0,
        cluster_spread=0.6,
        seed=0,
        name="x43",
    ),
    k=3,
    eps=0.165,
)

PRESETS = {p.name: p for p in (_X13, _X37, _X43)}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
