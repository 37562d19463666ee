"""Generate a synthetic scatterplot and count its clusters with both models.

Walks the full pipeline: parameter object -> dataset -> rendered image ->
merge tree -> cluster count at a chosen threshold.
"""

import pathlib

from percepta import (GenParams, RenderParams, build_density_tree,
                      build_distance_tree, cluster_count_at, compute_histogram,
                      generate_dataset, max_visual_density, rasterize,
                      write_image)

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

params = GenParams(width=550, height=550, cluster_count=5,
                   distribution_size=40.0, point_count=2500, snr=10.0)
dataset = generate_dataset(params, seed=7, min_center_separation=120.0)
print(f"dataset: {len(dataset.points)} points ({dataset.noise_count} noise)")
print(f"max visual density at P=3: "
      f"{max_visual_density(params.point_count, 3.0, 550, 550):.4f}")

image = rasterize(dataset, RenderParams(point_area=3.0, opacity=1.0))
write_image(image, OUT / "stimulus.png")
print(f"wrote {OUT / 'stimulus.png'}")

# distance model: single-linkage merge tree over the generating centers
dist_tree = build_distance_tree(dataset.centers)
for t in (40.0, 120.0, 400.0):
    print(f"distance model, T={t:>5.0f}px  -> "
          f"{cluster_count_at(dist_tree, t)} clusters")

# density model: sublevel merge tree of the binned whiteness field
hist = compute_histogram(image, 20, "coverage")
dens_tree = build_density_tree(hist)
for t in (0.05, 0.3, 0.8):
    print(f"density model,  T={t:>5.2f}   -> "
          f"{cluster_count_at(dens_tree, t)} clusters")
