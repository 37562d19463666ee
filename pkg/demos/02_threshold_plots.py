"""Threshold plots: the step function count(T) and its inversion.

The count of clusters as a function of the persistence threshold is a
non-increasing, right-continuous step function. Its breakpoints are the
finite persistences of the merge tree, so any target count maps back to
the interval of thresholds that produce it.
"""

import pathlib

from percepta import (GenParams, RenderParams, build_density_tree,
                      compute_histogram, generate_dataset, rasterize,
                      threshold_for_count, threshold_plot, write_step_chart)

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

params = GenParams(width=550, height=550, cluster_count=6,
                   distribution_size=25.0, point_count=2500, snr=10.0)
dataset = generate_dataset(params, seed=3, min_center_separation=150.0)
image = rasterize(dataset, RenderParams(point_area=7.0, opacity=1.0))
tree = build_density_tree(compute_histogram(image, 20, "coverage"))

plot = threshold_plot(tree)
print(f"count at T=0: {plot.count_at_zero}")
print("largest breakpoints:", [round(b, 4) for b in plot.breakpoints[:8]])

# invert: which threshold shows exactly k clusters?
for k in (6, 4, 2, 1):
    pick = threshold_for_count(tree, k)
    tag = "exact" if pick.exact else f"nearest achievable ({pick.achieved_count})"
    print(f"k={k}: T={pick.threshold:.4f} [{tag}] interval={pick.interval}")

write_step_chart(OUT / "threshold_plot.svg", [plot], labels=["B=20"],
                 title="cluster count vs persistence threshold",
                 marker=threshold_for_count(tree, 6).threshold)
print(f"wrote {OUT / 'threshold_plot.svg'}")
