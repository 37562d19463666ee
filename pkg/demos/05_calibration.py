"""Calibrating a threshold rule from response data.

Given stimuli and the cluster counts an observer reported, each response
pins down the threshold interval that reproduces the reported count; a
linear model of those thresholds over stimulus factors then predicts the
threshold (and hence the count) for unseen parameter combinations.

Here the observer is simulated from a planted linear rule so the fit can
be checked against ground truth.
"""

import numpy as np

from percepta import (GenParams, RenderParams, ResponseRecord,
                      build_density_tree, compute_histogram,
                      extract_thresholds, fit_threshold_model,
                      generate_dataset, model_differential, rasterize,
                      cluster_count_at, summarize_differentials)

rng = np.random.default_rng(0)
records, trees = [], []
for n in (500, 1500, 2500):
    for p in (1, 3, 5, 7):
        params = GenParams(width=550, height=550, cluster_count=5,
                           distribution_size=30.0, point_count=n, snr=10.0)
        dataset = generate_dataset(params, seed=n + p,
                                   min_center_separation=130.0)
        image = rasterize(dataset, RenderParams(point_area=float(p), opacity=1.0))
        tree = build_density_tree(compute_histogram(image, 20, "coverage"))
        # simulated observer: reads the count at a planted threshold rule
        t_true = 2e-5 * n + 0.01 * p + 0.05
        reported = cluster_count_at(tree, t_true)
        records.append(ResponseRecord(S=30.0, N=n, P=p, O=1.0, C=5, U=reported,
                                      participant="sim"))
        trees.append(tree)

records = extract_thresholds(records, trees)
model = fit_threshold_model(records, "N_and_P")
cn, cp, intercept = model.coefficients
print(f"fitted rule: T = {cn:.2e}*N + {cp:.4f}*P + {intercept:.4f}")
print(f"residual rms: {model.residual_rms:.4f} over {model.n_obs} records")
# counts quantize the underlying rule, so the fit targets the threshold
# intervals the responses pin down, not the generator's coefficients;
# the test of the model is how well it reproduces the reported counts

diffs = [model_differential(r, model, t) for r, t in zip(records, trees)]
summary = summarize_differentials(diffs)
print(f"differential (reported count - predicted): "
      f"mean={summary.mean:+.2f} std={summary.std:.2f}")
