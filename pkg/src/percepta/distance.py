"""Distance-based merge tree over cluster centers.

Balls of diameter D grow around each center; two components merge once
their balls first intersect, i.e. at D equal to the center distance. All
components are born at 0, so persistence equals the merge diameter, and
the finite deaths coincide with single-linkage dendrogram merge heights.
"""

import csv

import numpy as np

from .errors import DataError, ParameterError
from .topology import INF, MergeTree, TreeComponent, cluster_count_at
from .unionfind import UnionFind


def as_centers(centers):
    """Coerce to an (n, 2) float array of finite center positions."""
    arr = np.asarray(centers, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParameterError("centers must be an (n, 2) array of x,y positions")
    if len(arr) < 1:
        raise ParameterError("center set is empty")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("centers must be finite")
    return arr


def build_distance_tree(centers):
    """Merge tree of the center set under the growing-balls sweep.

    All O(n^2) pairwise edges are processed in ascending distance order
    (ties in lexicographic index order). At each union the component
    containing the lower original index survives; the other dies at the
    merge diameter. Center counts are small, so no spatial indexing.
    """
    pts = as_centers(centers)
    n = len(pts)
    deltas = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((deltas ** 2).sum(axis=2))
    i_idx, j_idx = np.triu_indices(n, k=1)
    order = np.lexsort((j_idx, i_idx, dist[i_idx, j_idx]))

    uf = UnionFind(n)
    comp_id = list(range(n))  # id of the component at each union-find root
    death = [INF] * n
    survivor_of = [None] * n
    for e in order:
        a, b = int(i_idx[e]), int(j_idx[e])
        ra, rb = uf.find(a), uf.find(b)
        if ra == rb:
            continue
        # the component holding the lower original index survives; since a
        # component only ever absorbs higher-id components, its id is that
        # minimum index
        if comp_id[ra] > comp_id[rb]:
            ra, rb = rb, ra
        death[comp_id[rb]] = float(dist[a, b])
        survivor_of[comp_id[rb]] = comp_id[ra]
        root = uf.union(ra, rb)
        comp_id[root] = comp_id[ra]

    components = [
        TreeComponent(id=i, birth=0.0, death=death[i], survivor_of=survivor_of[i])
        for i in range(n)
    ]
    return MergeTree(unit="distance", components=components)


def estimate_count_distance(centers, threshold):
    """Connected components of the graph joining centers at distance <= T."""
    if threshold < 0:
        raise ParameterError("threshold must be >= 0")
    return cluster_count_at(build_distance_tree(centers), threshold)


def load_centers_csv(path):
    """Read a standalone centers file: header "x,y" then one point per line."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["x", "y"]:
                raise DataError(f"centers: {path}: expected header \"x,y\"")
            rows = [(float(row["x"]), float(row["y"])) for row in reader]
    except OSError as exc:
        raise DataError(f"centers: cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise DataError(f"centers: {path}: {exc}") from exc
    return as_centers(np.array(rows, dtype=np.float64).reshape(-1, 2))
