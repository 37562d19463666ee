"""Merge trees, persistence pairs, and the persistence threshold plot.

A merge tree records one entry per connected component that ever existed
during a sweep: its birth value, its death value (the sweep value at which
it merged into a longer-lived component, or +inf for the final survivor),
and which component absorbed it. Persistence is death minus birth and
measures the relative scale of the feature; thresholding persistence maps
a merge tree to a perceived cluster count, and back.

Values are in model units: pixels of ball diameter for distance trees and
whiteness fractions for density trees.
"""

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StructuralError
from .jsonutil import (SCHEMA_VERSION, as_int, as_real, check_schema,
                       decode_real, encode_real, require)

INF = float("inf")

UNITS = ("distance", "density")


@dataclass(frozen=True)
class TreeComponent:
    """One component: born at `birth`, absorbed at `death` by the
    component with id `survivor_of` (None for the final survivor)."""

    id: int
    birth: float
    death: float
    survivor_of: int | None = None


@dataclass(frozen=True)
class MergeTree:
    unit: str
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.unit not in UNITS:
            raise StructuralError(f"unknown merge tree unit {self.unit!r}")
        if not self.components:
            raise StructuralError("merge tree has no components")
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise StructuralError("merge tree component ids are not unique")
        infinite = [c for c in self.components if math.isinf(c.death)]
        if len(infinite) != 1:
            raise StructuralError(
                f"merge tree must have exactly one infinite component, found {len(infinite)}")
        for c in self.components:
            if c.death < c.birth:
                raise StructuralError(f"component {c.id} dies before it is born")

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "unit": self.unit,
            "components": [
                {
                    "id": c.id,
                    "birth": float(c.birth),
                    "death": encode_real(c.death),
                    "survivor_of": c.survivor_of,
                }
                for c in self.components
            ],
        }

    @classmethod
    def from_dict(cls, data, context="merge_tree"):
        check_schema(data, context)
        components = []
        for i, entry in enumerate(require(data, "components", context)):
            ctx = f"{context}.components[{i}]"
            survivor = entry.get("survivor_of")
            components.append(TreeComponent(
                id=as_int(require(entry, "id", ctx), ctx + ".id"),
                birth=as_real(require(entry, "birth", ctx), ctx + ".birth"),
                death=decode_real(require(entry, "death", ctx), ctx + ".death"),
                survivor_of=None if survivor is None else as_int(
                    survivor, ctx + ".survivor_of"),
            ))
        return cls(unit=str(require(data, "unit", context)), components=components)


@dataclass(frozen=True)
class PersistencePair:
    id: int
    birth: float
    death: float
    persistence: float

    def to_dict(self):
        return {
            "id": self.id,
            "birth": float(self.birth),
            "death": encode_real(self.death),
            "persistence": encode_real(self.persistence),
        }


@dataclass(frozen=True)
class ThresholdPick:
    """Result of inverting the threshold plot at a target count.

    `interval` is the half-open [lo, hi) range of thresholds that yield
    `achieved_count`; `threshold` is the representative point inside it.
    `exact` is False when the requested count was unachievable and the
    nearest achievable count was returned instead.
    """

    threshold: float
    achieved_count: int
    exact: bool
    interval: tuple


def persistence_pairs(tree):
    """One persistence pair per tree component; exactly one is infinite."""
    return [
        PersistencePair(id=c.id, birth=c.birth, death=c.death,
                        persistence=c.death - c.birth)
        for c in tree.components
    ]


def _finite_persistences_desc(tree):
    values = sorted(
        (c.death - c.birth for c in tree.components if not math.isinf(c.death)),
        reverse=True,
    )
    return values


def cluster_count_at(tree, threshold):
    """Number of components with persistence strictly above the threshold.

    The infinite component always counts, so the result is at least 1.
    """
    if threshold < 0:
        raise ParameterError("threshold must be >= 0")
    return sum(1 for c in tree.components if c.death - c.birth > threshold)


@dataclass(frozen=True)
class ThresholdPlot:
    """Right-continuous step function: threshold -> perceived cluster count.

    breakpoints hold the finite persistences in descending order, with
    multiplicity. The count at threshold T is 1 plus the number of
    breakpoints strictly above T; at or beyond the largest breakpoint it
    is 1.
    """

    unit: str
    breakpoints: tuple
    count_at_zero: int

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        if self.unit not in UNITS:
            raise StructuralError(f"unknown threshold plot unit {self.unit!r}")
        if any(b < 0 for b in self.breakpoints):
            raise StructuralError("breakpoints must be non-negative")
        if list(self.breakpoints) != sorted(self.breakpoints, reverse=True):
            raise StructuralError("breakpoints must be sorted descending")

    def evaluate(self, threshold):
        if threshold < 0:
            raise ParameterError("threshold must be >= 0")
        ascending = self.breakpoints[::-1]
        return 1 + len(ascending) - bisect.bisect_right(ascending, threshold)

    def evaluate_many(self, thresholds):
        thresholds = np.asarray(thresholds, dtype=np.float64)
        if thresholds.size and thresholds.min() < 0:
            raise ParameterError("threshold must be >= 0")
        ascending = np.array(self.breakpoints[::-1], dtype=np.float64)
        return 1 + len(ascending) - np.searchsorted(ascending, thresholds, side="right")

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "unit": self.unit,
            "breakpoints": [float(b) for b in self.breakpoints],
            "count_at_zero": self.count_at_zero,
        }

    @classmethod
    def from_dict(cls, data, context="threshold_plot"):
        check_schema(data, context)
        return cls(
            unit=str(require(data, "unit", context)),
            breakpoints=tuple(
                as_real(b, context + ".breakpoints")
                for b in require(data, "breakpoints", context)),
            count_at_zero=as_int(require(data, "count_at_zero", context),
                                 context + ".count_at_zero"),
        )


def threshold_plot(tree):
    finite = _finite_persistences_desc(tree)
    count_at_zero = 1 + sum(1 for p in finite if p > 0)
    return ThresholdPlot(unit=tree.unit, breakpoints=tuple(finite),
                         count_at_zero=count_at_zero)


def _achievable_counts(finite_desc):
    """Counts k whose threshold interval [p_k, p_{k-1}) is non-empty,
    with p_0 = +inf and p_{m+1} = 0."""
    m = len(finite_desc)
    achievable = [1]
    for k in range(2, m + 2):
        upper = finite_desc[k - 2]
        lower = finite_desc[k - 1] if k <= m else 0.0
        if upper > lower:
            achievable.append(k)
    return achievable


def _interval_for_count(finite_desc, k):
    m = len(finite_desc)
    lower = finite_desc[k - 1] if k <= m else 0.0
    upper = finite_desc[k - 2] if k >= 2 else INF
    return lower, upper


def threshold_for_count(tree, k):
    """Invert the threshold plot: find a threshold yielding k clusters.

    For an achievable k the representative threshold is the midpoint of
    the count-k interval, except k = 1 where it is the interval's left
    endpoint (the largest finite persistence, the smallest threshold that
    already yields a single cluster). Unachievable counts (persistence
    ties, or k beyond the component count) fall back to the nearest
    achievable count, preferring the smaller count on distance ties, and
    are flagged exact=False.
    """
    if k < 1:
        raise ParameterError("cluster count must be >= 1")
    finite = _finite_persistences_desc(tree)
    achievable = _achievable_counts(finite)
    exact = k in achievable
    target = k if exact else min(achievable, key=lambda a: (abs(a - k), a))
    lower, upper = _interval_for_count(finite, target)
    if target == 1:
        representative = lower
    else:
        representative = (lower + upper) / 2.0
        # guard against the midpoint rounding up onto the interval's open
        # end when the two persistences are adjacent floats
        if cluster_count_at(tree, representative) != target:
            representative = lower
    return ThresholdPick(
        threshold=representative,
        achieved_count=target,
        exact=exact,
        interval=(lower, upper),
    )
