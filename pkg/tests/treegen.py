"""Random valid merge trees for property tests."""

import numpy as np

from percepta.topology import INF, MergeTree, TreeComponent


def random_tree(rng, max_components=12, unit="density"):
    """A structurally valid tree: one infinite component, deaths >= births.

    Values are sometimes quantized to force persistence ties.
    """
    n = int(rng.integers(1, max_components + 1))
    quantize = bool(rng.integers(0, 2))
    births = rng.uniform(0, 1, size=n)
    lifetimes = rng.uniform(0, 2, size=n)
    if quantize:
        births = np.round(births, 1)
        lifetimes = np.round(lifetimes, 1)
    components = []
    for i in range(n):
        death = INF if i == 0 else float(births[i] + lifetimes[i])
        components.append(TreeComponent(id=i, birth=float(births[i]), death=death))
    return MergeTree(unit=unit, components=components)
