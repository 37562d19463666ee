"""Synthetic clustered scatterplots and their rendering as grayscale stimuli.

A dataset is produced from six generation parameters (image size, cluster
count, cluster spread, point budget, signal-to-noise ratio) plus a seed.
Rendering stamps each point as a filled circle of a given area and opacity
onto a white canvas, giving an ink-on-white intensity grid where dense
regions are intensity minima.

Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64) and is
consumed in a fixed, documented order so that tests can replay the stream:

1. cluster centers: one ``rng.uniform`` call of shape ``(C, 2)`` over the
   safe zone (with ``min_center_separation > 0`` the centers are instead
   drawn one at a time with rejection, see ``generate_dataset``);
2. for each cluster, in index order: one ``rng.normal`` call of shape
   ``(n_i, 2)`` centered on that cluster's center with sigma ``S``;
3. noise: one ``rng.uniform`` call of shape ``(n_noise, 2)`` over the
   full image.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .jsonutil import SCHEMA_VERSION, as_int, as_real, check_schema, require

NOISE_ORIGIN = -1  # origin label for uniform background noise


@dataclass(frozen=True)
class GenParams:
    """Dataset generation parameters.

    width, height      image size in pixels
    cluster_count      number of generated clusters (C >= 1)
    distribution_size  standard deviation of the isotropic normal, pixels
    point_count        total clustered-point budget before discards
    snr                signal:noise ratio as one number (10 means 10:1)
    """

    width: int
    height: int
    cluster_count: int
    distribution_size: float
    point_count: int
    snr: float

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ParameterError("width and height must be positive")
        if self.cluster_count < 1:
            raise ParameterError("cluster_count must be >= 1")
        if self.distribution_size <= 0:
            raise ParameterError("distribution_size must be positive")
        if self.point_count < 0:
            raise ParameterError("point_count must be >= 0")
        if self.snr <= 0:
            raise ParameterError("snr must be positive")
        if self.distribution_size > min(self.width, self.height) / 2:
            raise ParameterError(
                "degenerate safe zone: distribution_size exceeds half the "
                "smaller image dimension")

    def to_dict(self):
        return {
            "width": self.width,
            "height": self.height,
            "cluster_count": self.cluster_count,
            "distribution_size": self.distribution_size,
            "point_count": self.point_count,
            "snr": self.snr,
        }

    @classmethod
    def from_dict(cls, data, context="params"):
        return cls(
            width=as_int(require(data, "width", context), context + ".width"),
            height=as_int(require(data, "height", context), context + ".height"),
            cluster_count=as_int(require(data, "cluster_count", context),
                                 context + ".cluster_count"),
            distribution_size=as_real(require(data, "distribution_size", context),
                                      context + ".distribution_size"),
            point_count=as_int(require(data, "point_count", context),
                               context + ".point_count"),
            snr=as_real(require(data, "snr", context), context + ".snr"),
        )


@dataclass(frozen=True)
class RenderParams:
    """Rendering parameters: per-point circle area (square pixels) and
    opacity as a fraction in (0, 1]."""

    point_area: float
    opacity: float = 1.0

    def __post_init__(self):
        if self.point_area <= 0:
            raise ParameterError("point_area must be positive")
        if not 0 < self.opacity <= 1:
            raise ParameterError("opacity must lie in (0, 1]")

    @property
    def radius(self):
        return math.sqrt(self.point_area / math.pi)

    def to_dict(self):
        return {"point_area": self.point_area, "opacity": self.opacity}

    @classmethod
    def from_dict(cls, data, context="render"):
        return cls(
            point_area=as_real(require(data, "point_area", context),
                               context + ".point_area"),
            opacity=as_real(data.get("opacity", 1.0), context + ".opacity"),
        )


@dataclass(frozen=True)
class Dataset:
    """Generated cluster centers plus labeled points in image coordinates.

    points is an (M, 2) float array; origins is the matching (M,) int array
    of cluster indices, with NOISE_ORIGIN marking background noise.
    """

    params: GenParams
    centers: np.ndarray
    points: np.ndarray
    origins: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "centers", np.asarray(self.centers, dtype=np.float64).reshape(-1, 2))
        object.__setattr__(self, "points", np.asarray(self.points, dtype=np.float64).reshape(-1, 2))
        object.__setattr__(self, "origins", np.asarray(self.origins, dtype=np.int64).reshape(-1))
        if len(self.points) != len(self.origins):
            raise ParameterError("points and origins must have matching length")

    @property
    def noise_count(self):
        return int(np.sum(self.origins == NOISE_ORIGIN))

    def cluster_sizes(self):
        """Retained point count per cluster index."""
        counts = np.zeros(self.params.cluster_count, dtype=np.int64)
        labels = self.origins[self.origins != NOISE_ORIGIN]
        np.add.at(counts, labels, 1)
        return counts

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "params": self.params.to_dict(),
            "centers": [[float(x), float(y)] for x, y in self.centers],
            "points": [
                {
                    "x": float(x),
                    "y": float(y),
                    "origin": "noise" if o == NOISE_ORIGIN else int(o),
                }
                for (x, y), o in zip(self.points, self.origins)
            ],
        }

    @classmethod
    def from_dict(cls, data, context="dataset"):
        check_schema(data, context)
        params = GenParams.from_dict(require(data, "params", context), context + ".params")
        centers = np.asarray(require(data, "centers", context), dtype=np.float64)
        raw_points = require(data, "points", context)
        points = np.zeros((len(raw_points), 2), dtype=np.float64)
        origins = np.zeros(len(raw_points), dtype=np.int64)
        for i, entry in enumerate(raw_points):
            ctx = f"{context}.points[{i}]"
            points[i, 0] = as_real(require(entry, "x", ctx), ctx + ".x")
            points[i, 1] = as_real(require(entry, "y", ctx), ctx + ".y")
            origin = require(entry, "origin", ctx)
            origins[i] = NOISE_ORIGIN if origin == "noise" else as_int(
                origin, ctx + ".origin")
        return cls(params=params, centers=centers, points=points, origins=origins)


@dataclass(frozen=True)
class StimulusImage:
    """Grayscale intensity grid, 1.0 = white background, 0.0 = full ink.

    intensity is row-major with shape (height, width); pixel (column i,
    row j) has its center at image coordinates (i + 0.5, j + 0.5).
    """

    width: int
    height: int
    intensity: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.intensity, dtype=np.float64)
        if grid.shape != (self.height, self.width):
            raise ParameterError("intensity grid does not match width/height")
        if grid.size and (grid.min() < 0.0 or grid.max() > 1.0):
            raise ParameterError("intensity values must lie in [0, 1]")
        object.__setattr__(self, "intensity", grid)

    @classmethod
    def blank(cls, width, height):
        return cls(width=width, height=height, intensity=np.ones((height, width)))


def noise_point_count(point_count, snr):
    """Number of uniform noise points: N/snr rounded half up."""
    return int(math.floor(point_count / snr + 0.5))


def _cluster_shares(point_count, cluster_count):
    base, extra = divmod(point_count, cluster_count)
    return [base + 1 if i < extra else base for i in range(cluster_count)]


def _draw_separated_centers(rng, params, min_separation,
                            tries_per_center=1000, restarts=1000):
    s = params.distribution_size
    lo = np.array([s, s])
    hi = np.array([params.width - s, params.height - s])
    min_sq = min_separation * min_separation
    for _ in range(restarts):
        placed = []
        for _ in range(params.cluster_count):
            for _ in range(tries_per_center):
                cand = rng.uniform(lo, hi)
                if all((cand[0] - p[0]) ** 2 + (cand[1] - p[1]) ** 2 >= min_sq
                       for p in placed):
                    placed.append(cand)
                    break
            else:
                break
        if len(placed) == params.cluster_count:
            return np.array(placed)
    raise ParameterError(
        f"cannot place {params.cluster_count} centers with pairwise "
        f"separation >= {min_separation} in the safe zone")


def generate_dataset(params, seed, min_center_separation=0.0):
    """Generate a clustered dataset, deterministically for a fixed seed.

    Centers are uniform over the safe zone [S, X-S] x [S, Y-S]. Each
    cluster receives an equal share of the point budget, with the
    remainder going to the lowest-indexed clusters; cluster points are
    drawn from an isotropic normal (sigma = S) around their center and
    those falling outside [0, X) x [0, Y) are discarded without
    replacement. round(N/snr) uniform noise points are appended last.

    min_center_separation > 0 switches center placement to per-center
    rejection sampling (with whole-set restarts) until all pairwise
    center distances meet the bound; the point streams that follow are
    unchanged.
    """
    if not isinstance(params, GenParams):
        raise ParameterError("params must be a GenParams instance")
    rng = np.random.default_rng(seed)
    s = params.distribution_size
    if min_center_separation > 0:
        centers = _draw_separated_centers(rng, params, min_center_separation)
    else:
        centers = rng.uniform(
            [s, s],
            [params.width - s, params.height - s],
            size=(params.cluster_count, 2),
        )

    chunks = []
    labels = []
    for index, share in enumerate(_cluster_shares(params.point_count, params.cluster_count)):
        raw = rng.normal(centers[index], s, size=(share, 2))
        keep = (
            (raw[:, 0] >= 0) & (raw[:, 0] < params.width)
            & (raw[:, 1] >= 0) & (raw[:, 1] < params.height)
        )
        kept = raw[keep]
        chunks.append(kept)
        labels.append(np.full(len(kept), index, dtype=np.int64))

    n_noise = noise_point_count(params.point_count, params.snr)
    noise = rng.uniform([0.0, 0.0], [params.width, params.height], size=(n_noise, 2))
    chunks.append(noise)
    labels.append(np.full(n_noise, NOISE_ORIGIN, dtype=np.int64))

    return Dataset(
        params=params,
        centers=centers,
        points=np.concatenate(chunks) if chunks else np.zeros((0, 2)),
        origins=np.concatenate(labels) if labels else np.zeros(0, dtype=np.int64),
    )


def cover_counts(points, radius, width, height):
    """Per-pixel count of stamped disks covering each pixel center.

    A pixel is covered iff its center lies within ``radius`` (inclusive)
    of the point. Integer counts make the rendered image independent of
    point order by construction.
    """
    counts = np.zeros((height, width), dtype=np.int64)
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if len(pts) == 0:
        return counts
    span = int(math.ceil(2 * radius)) + 1
    offsets = np.arange(span)
    chunk = max(1, 4_000_000 // (span * span))
    for start in range(0, len(pts), chunk):
        p = pts[start:start + chunk]
        ix = np.ceil(p[:, 0] - radius - 0.5).astype(np.int64)[:, None] + offsets
        iy = np.ceil(p[:, 1] - radius - 0.5).astype(np.int64)[:, None] + offsets
        dx = ix + 0.5 - p[:, 0][:, None]
        dy = iy + 0.5 - p[:, 1][:, None]
        inside = (
            (dx[:, None, :] ** 2 + dy[:, :, None] ** 2 <= radius * radius)
            & (ix[:, None, :] >= 0) & (ix[:, None, :] < width)
            & (iy[:, :, None] >= 0) & (iy[:, :, None] < height)
        )
        rows = np.broadcast_to(iy[:, :, None], inside.shape)[inside]
        cols = np.broadcast_to(ix[:, None, :], inside.shape)[inside]
        np.add.at(counts, (rows, cols), 1)
    return counts


def rasterize(dataset, render):
    """Render a dataset to an ink-on-white stimulus image.

    Each covering disk multiplies the pixel's intensity by (1 - opacity),
    so k overlapping disks leave (1 - opacity)**k; full opacity blacks the
    pixel out exactly. The result is identical under any point ordering.
    """
    if not isinstance(render, RenderParams):
        raise ParameterError("render must be a RenderParams instance")
    width, height = dataset.params.width, dataset.params.height
    counts = cover_counts(dataset.points, render.radius, width, height)
    intensity = np.power(1.0 - render.opacity, counts)
    return StimulusImage(width=width, height=height, intensity=intensity)


def max_visual_density(point_count, point_area, width, height):
    """Upper bound on the inked fraction if no points overlapped:
    N * P / (X * Y), deliberately uncapped."""
    if width <= 0 or height <= 0:
        raise ParameterError("width and height must be positive")
    if point_area <= 0:
        raise ParameterError("point_area must be positive")
    if point_count < 0:
        raise ParameterError("point_count must be >= 0")
    return point_count * point_area / (width * height)
