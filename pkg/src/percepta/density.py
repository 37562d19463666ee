"""Density-based model: visual-density histogram and its join tree.

The image is cut into B x B pixel bins (edge bins keep their true, smaller
pixel counts) and each bin gets a whiteness fraction f in [0, 1]: the share
of fully white pixels in coverage mode, or the mean intensity in
intensity_sum mode, which generalizes to semi-transparent rendering. Both
agree exactly on fully opaque images.

Clusters are inked, so they are minima of f. Sweeping f upward and joining
bins to their 8-neighbors yields the join tree: a bin with no earlier
neighbor births a component; a bin adjacent to several components merges
them, the younger (higher birth) dying there, ties going to the lower
row-major index. Because f is already normalized by bin area, thresholds
are directly comparable across bin sizes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .jsonutil import SCHEMA_VERSION, as_int, check_schema, require
from .topology import INF, MergeTree, TreeComponent, cluster_count_at, threshold_for_count

MODES = ("coverage", "intensity_sum")


@dataclass(frozen=True)
class DensityHistogram:
    bin_size: int
    cols: int
    rows: int
    f: np.ndarray
    mode: str

    def __post_init__(self):
        grid = np.asarray(self.f, dtype=np.float64)
        if self.mode not in MODES:
            raise ParameterError(f"unknown histogram mode {self.mode!r}")
        if self.bin_size < 1:
            raise ParameterError("bin_size must be >= 1")
        if grid.shape != (self.rows, self.cols):
            raise ParameterError("histogram grid does not match rows/cols")
        if grid.size == 0:
            raise ParameterError("histogram is empty")
        if grid.min() < 0.0 or grid.max() > 1.0:
            raise ParameterError("histogram values must lie in [0, 1]")
        object.__setattr__(self, "f", grid)

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "bin_size": self.bin_size,
            "cols": self.cols,
            "rows": self.rows,
            "mode": self.mode,
            "f": [[float(v) for v in row] for row in self.f],
        }

    @classmethod
    def from_dict(cls, data, context="histogram"):
        check_schema(data, context)
        return cls(
            bin_size=as_int(require(data, "bin_size", context), context + ".bin_size"),
            cols=as_int(require(data, "cols", context), context + ".cols"),
            rows=as_int(require(data, "rows", context), context + ".rows"),
            f=np.asarray(require(data, "f", context), dtype=np.float64),
            mode=str(require(data, "mode", context)),
        )


def compute_histogram(image, bin_size, mode="coverage"):
    """Bin an image into the whiteness histogram.

    bin_size may exceed the image dimensions, collapsing everything into a
    single bin. Edge bins divide by their true pixel counts.
    """
    if bin_size < 1:
        raise ParameterError("bin_size must be >= 1")
    if mode not in MODES:
        raise ParameterError(f"unknown histogram mode {mode!r}")
    if mode == "coverage":
        values = (image.intensity == 1.0).astype(np.float64)
    else:
        values = image.intensity
    row_starts = np.arange(0, image.height, bin_size)
    col_starts = np.arange(0, image.width, bin_size)
    sums = np.add.reduceat(np.add.reduceat(values, row_starts, axis=0), col_starts, axis=1)
    row_sizes = np.minimum(row_starts + bin_size, image.height) - row_starts
    col_sizes = np.minimum(col_starts + bin_size, image.width) - col_starts
    pixel_counts = np.outer(row_sizes, col_sizes).astype(np.float64)
    return DensityHistogram(
        bin_size=bin_size,
        cols=len(col_starts),
        rows=len(row_starts),
        f=sums / pixel_counts,
        mode=mode,
    )


_NEIGHBOR_STEPS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def build_density_tree(hist):
    """Join tree of the histogram's sublevel sets under 8-connectivity.

    Bins are processed in ascending f (ties by row-major index). A bin
    whose processed 8-neighbors are all absent births a component at its
    f; one that touches existing components joins them, merging the
    younger into the elder at its f. The single surviving component dies
    at +inf.
    """
    if not isinstance(hist, DensityHistogram):
        raise ParameterError("hist must be a DensityHistogram instance")
    rows, cols = hist.rows, hist.cols
    flat = hist.f.ravel()
    order = np.argsort(flat, kind="stable")

    parent = np.arange(rows * cols, dtype=np.int64)
    processed = np.zeros(rows * cols, dtype=bool)
    comp_at_root = {}    # union-find root -> component id
    births = {}          # component id -> birth value
    deaths = {}
    survivors = {}
    birth_order = []

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while i != root:
            parent[i], i = root, parent[i]
        return root

    for flat_idx in order:
        flat_idx = int(flat_idx)
        level = float(flat[flat_idx])
        r, c = divmod(flat_idx, cols)
        touching = []
        for dr, dc in _NEIGHBOR_STEPS:
            nr, nc = r + dr, c + dc
            if 0 <= nr < rows and 0 <= nc < cols and processed[nr * cols + nc]:
                root = find(nr * cols + nc)
                if root not in touching:
                    touching.append(root)
        processed[flat_idx] = True
        if not touching:
            comp_at_root[flat_idx] = flat_idx
            births[flat_idx] = level
            birth_order.append(flat_idx)
            continue
        # elder rule: the earliest birth survives, ties to lower bin index
        winner = min(touching, key=lambda root: (births[comp_at_root[root]], comp_at_root[root]))
        winner_comp = comp_at_root[winner]
        merged = winner
        for root in touching:
            if root == winner:
                continue
            comp = comp_at_root.pop(root)
            deaths[comp] = level
            survivors[comp] = winner_comp
            parent[root] = merged
            merged = find(root)
        parent[flat_idx] = merged
        merged = find(flat_idx)
        comp_at_root.pop(winner, None)
        comp_at_root[merged] = winner_comp

    components = [
        TreeComponent(
            id=comp,
            birth=births[comp],
            death=deaths.get(comp, INF),
            survivor_of=survivors.get(comp),
        )
        for comp in birth_order
    ]
    return MergeTree(unit="density", components=components)


def estimate_count_density(image, bin_size, mode, threshold):
    """Perceived cluster count of an image at a persistence threshold."""
    if threshold < 0:
        raise ParameterError("threshold must be >= 0")
    tree = build_density_tree(compute_histogram(image, bin_size, mode))
    return cluster_count_at(tree, threshold)


@dataclass(frozen=True)
class ScanPoint:
    bin_size: int
    threshold: float
    achieved_count: int
    exact: bool

    def to_dict(self):
        return {
            "bin_size": self.bin_size,
            "threshold": float(self.threshold),
            "achieved_count": self.achieved_count,
            "exact": self.exact,
        }


def resolution_scan(image, bins, k, mode="coverage"):
    """Threshold for a target count k at each histogram resolution.

    The whiteness fractions are already area-normalized, so the returned
    thresholds are directly comparable across bin sizes; stability of the
    threshold as B grows guides the choice of histogram resolution.
    """
    if k < 1:
        raise ParameterError("cluster count must be >= 1")
    results = []
    for bin_size in bins:
        tree = build_density_tree(compute_histogram(image, bin_size, mode))
        pick = threshold_for_count(tree, k)
        results.append(ScanPoint(
            bin_size=int(bin_size),
            threshold=pick.threshold,
            achieved_count=pick.achieved_count,
            exact=pick.exact,
        ))
    return results
