"""Dataset synthesis, rasterization, and image round trips."""

import numpy as np
import pytest

import oracles
from percepta.errors import DataError, ParameterError
from percepta.images import (
    from_bytes_grid,
    png_bytes,
    read_image,
    read_pgm,
    to_bytes_grid,
    write_image,
    write_pgm,
)
from percepta.synth import (
    NOISE_ORIGIN,
    Dataset,
    GenParams,
    RenderParams,
    StimulusImage,
    cover_counts,
    generate_dataset,
    max_visual_density,
    noise_point_count,
    rasterize,
)


def small_params(**kw):
    base = dict(width=100, height=80, cluster_count=3, distribution_size=8.0,
                point_count=60, snr=10.0)
    base.update(kw)
    return GenParams(**base)


class TestParams:
    def test_rejects_degenerate_safe_zone(self):
        with pytest.raises(ParameterError):
            small_params(distribution_size=41.0)  # > min(100, 80)/2

    def test_rejects_nonpositive_fields(self):
        for kw in (dict(width=0), dict(height=-5), dict(cluster_count=0),
                   dict(distribution_size=0.0), dict(point_count=-1), dict(snr=0.0)):
            with pytest.raises(ParameterError):
                small_params(**kw)

    def test_render_params_validation(self):
        with pytest.raises(ParameterError):
            RenderParams(point_area=0.0)
        with pytest.raises(ParameterError):
            RenderParams(point_area=1.0, opacity=0.0)
        with pytest.raises(ParameterError):
            RenderParams(point_area=1.0, opacity=1.5)
        assert RenderParams(point_area=np.pi).radius == pytest.approx(1.0)


class TestNoiseCount:
    def test_rounds_half_up(self):
        assert noise_point_count(500, 10) == 50
        assert noise_point_count(25, 10) == 3   # 2.5 rounds up
        assert noise_point_count(24, 10) == 2   # 2.4 rounds down
        assert noise_point_count(0, 10) == 0


class TestGeneration:
    def test_deterministic_for_seed(self):
        a = generate_dataset(small_params(), 42)
        b = generate_dataset(small_params(), 42)
        np.testing.assert_array_equal(a.points, b.points)
        np.testing.assert_array_equal(a.centers, b.centers)
        np.testing.assert_array_equal(a.origins, b.origins)
        c = generate_dataset(small_params(), 43)
        assert not np.array_equal(a.centers, c.centers)

    def test_matches_documented_stream(self):
        # the random stream order is a documented contract: centers,
        # per-cluster normals in index order, uniform noise
        for seed in range(10):
            params = small_params(point_count=50 + seed, cluster_count=2 + seed % 3)
            ds = generate_dataset(params, seed)
            centers, points, origins = oracles.replay_generation(params, seed)
            np.testing.assert_array_equal(ds.centers, centers)
            np.testing.assert_array_equal(ds.points, points)
            np.testing.assert_array_equal(ds.origins, origins)

    def test_centers_in_safe_zone_points_in_bounds(self):
        rng = np.random.default_rng(7)
        for seed in rng.integers(0, 10_000, size=20):
            params = small_params()
            ds = generate_dataset(params, int(seed))
            s = params.distribution_size
            assert np.all(ds.centers[:, 0] >= s) and np.all(ds.centers[:, 0] <= 100 - s)
            assert np.all(ds.centers[:, 1] >= s) and np.all(ds.centers[:, 1] <= 80 - s)
            assert np.all(ds.points[:, 0] >= 0) and np.all(ds.points[:, 0] < 100)
            assert np.all(ds.points[:, 1] >= 0) and np.all(ds.points[:, 1] < 80)

    def test_shares_and_labels(self):
        ds = generate_dataset(small_params(point_count=10, cluster_count=3,
                                           snr=1e9), 3)
        # shares 4/3/3 minus any out-of-bounds discards
        sizes = ds.cluster_sizes()
        assert sizes[0] <= 4 and sizes[1] <= 3 and sizes[2] <= 3
        assert ds.noise_count == 0
        # clustered points keep index order, noise appended last
        labels = ds.origins
        non_noise = labels[labels != NOISE_ORIGIN]
        assert np.all(np.diff(non_noise) >= 0)

    def test_noise_appended_last(self):
        ds = generate_dataset(small_params(point_count=40, snr=4.0), 11)
        assert ds.noise_count == 10
        assert np.all(ds.origins[-10:] == NOISE_ORIGIN)
        assert np.all(ds.origins[:-10] != NOISE_ORIGIN)

    def test_min_separation_honored(self):
        params = GenParams(width=550, height=550, cluster_count=8,
                           distribution_size=25.0, point_count=100, snr=10.0)
        for seed in range(5):
            ds = generate_dataset(params, seed, min_center_separation=150.0)
            diff = ds.centers[:, None, :] - ds.centers[None, :, :]
            dist = np.sqrt((diff ** 2).sum(-1))
            np.fill_diagonal(dist, np.inf)
            assert dist.min() >= 150.0

    def test_impossible_separation_raises(self):
        with pytest.raises(ParameterError):
            generate_dataset(small_params(), 0, min_center_separation=1000.0)

    def test_dataset_json_round_trip(self):
        ds = generate_dataset(small_params(snr=5.0), 9)
        doc = ds.to_dict()
        assert doc["schema"] == 1
        back = Dataset.from_dict(doc)
        np.testing.assert_array_equal(back.points, ds.points)
        np.testing.assert_array_equal(back.origins, ds.origins)
        np.testing.assert_array_equal(back.centers, ds.centers)
        assert back.params == ds.params
        assert any(p["origin"] == "noise" for p in doc["points"])

    def test_dataset_from_dict_rejects_junk(self):
        doc = generate_dataset(small_params(), 1).to_dict()
        doc["points"][0]["x"] = "oops"
        with pytest.raises(DataError):
            Dataset.from_dict(doc)


def one_point_dataset(x, y, width=10, height=10):
    params = GenParams(width=width, height=height, cluster_count=1,
                       distribution_size=1.0, point_count=1, snr=1e9)
    return Dataset(params=params, centers=[[x, y]], points=[[x, y]], origins=[0])


class TestRasterize:
    def test_unit_disk_inks_four_pixels(self):
        image = rasterize(one_point_dataset(5.0, 5.0), RenderParams(point_area=np.pi))
        assert int((image.intensity == 0.0).sum()) == 4
        assert int((image.intensity < 1.0).sum()) == 4
        ink = np.argwhere(image.intensity == 0.0)
        assert sorted(map(tuple, ink)) == [(4, 4), (4, 5), (5, 4), (5, 5)]

    def test_boundary_pixel_center_is_covered(self):
        # pixel center exactly radius away must count as covered
        counts = cover_counts([[2.0, 1.5]], 1.5, 10, 10)
        assert counts[1, 0] == 1  # center (0.5, 1.5) at distance exactly 1.5

    def test_full_opacity_is_exact_zero(self):
        image = rasterize(one_point_dataset(5.0, 5.0),
                          RenderParams(point_area=4.0, opacity=1.0))
        covered = image.intensity < 1.0
        assert np.all(image.intensity[covered] == 0.0)

    def test_coincident_half_opacity_compounds(self):
        ds = one_point_dataset(5.0, 5.0)
        stacked = Dataset(params=ds.params, centers=ds.centers,
                          points=[[5.0, 5.0], [5.0, 5.0]], origins=[0, 0])
        image = rasterize(stacked, RenderParams(point_area=np.pi, opacity=0.5))
        assert image.intensity.min() == pytest.approx(0.25)

    def test_point_order_never_changes_pixels(self):
        rng = np.random.default_rng(5)
        params = GenParams(width=40, height=30, cluster_count=1,
                           distribution_size=5.0, point_count=1, snr=1e9)
        pts = rng.uniform([0, 0], [40, 30], size=(25, 2))
        base = Dataset(params=params, centers=[[20.0, 15.0]], points=pts,
                       origins=np.zeros(25, dtype=np.int64))
        image_a = rasterize(base, RenderParams(point_area=6.0, opacity=0.37))
        perm = rng.permutation(25)
        shuffled = Dataset(params=params, centers=[[20.0, 15.0]], points=pts[perm],
                           origins=np.zeros(25, dtype=np.int64))
        image_b = rasterize(shuffled, RenderParams(point_area=6.0, opacity=0.37))
        np.testing.assert_array_equal(image_a.intensity, image_b.intensity)

    def test_cover_counts_match_per_pixel_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(8):
            n = int(rng.integers(1, 8))
            pts = rng.uniform([-2, -2], [14, 12], size=(n, 2))
            radius = float(rng.uniform(0.3, 3.0))
            fast = cover_counts(pts, radius, 12, 10)
            slow = oracles.disk_cover_counts(pts, radius, 12, 10)
            np.testing.assert_array_equal(fast, slow)

    def test_points_outside_image_are_clipped(self):
        counts = cover_counts([[-5.0, -5.0], [100.0, 100.0]], 2.0, 10, 10)
        assert counts.sum() == 0

    def test_empty_dataset_renders_blank(self):
        params = GenParams(width=12, height=9, cluster_count=1,
                           distribution_size=1.0, point_count=0, snr=1e9)
        ds = Dataset(params=params, centers=[[5.0, 5.0]],
                     points=np.zeros((0, 2)), origins=np.zeros(0, dtype=np.int64))
        image = rasterize(ds, RenderParams(point_area=3.0))
        assert np.all(image.intensity == 1.0)
        assert (image.height, image.width) == (9, 12)


class TestMaxVisualDensity:
    def test_paper_operating_point(self):
        assert abs(max_visual_density(12500, 7, 550, 550) - 0.29) < 0.005

    def test_formula_uncapped(self):
        assert max_visual_density(100, 50, 10, 10) == 50.0
        assert max_visual_density(0, 7, 550, 550) == 0.0

    def test_validation(self):
        with pytest.raises(ParameterError):
            max_visual_density(10, 0, 550, 550)
        with pytest.raises(ParameterError):
            max_visual_density(10, 7, 0, 550)
        with pytest.raises(ParameterError):
            max_visual_density(-1, 7, 550, 550)


class TestImageIO:
    def test_byte_grid_round_trip(self):
        rng = np.random.default_rng(3)
        image = StimulusImage(width=7, height=5, intensity=rng.uniform(0, 1, (5, 7)))
        grid = to_bytes_grid(image)
        back = from_bytes_grid(grid)
        assert np.abs(back.intensity - image.intensity).max() <= 0.5 / 255 + 1e-12

    def test_pgm_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        image = StimulusImage(width=9, height=6, intensity=rng.uniform(0, 1, (6, 9)))
        path = tmp_path / "img.pgm"
        write_pgm(image, path)
        back = read_pgm(path)
        np.testing.assert_array_equal(to_bytes_grid(back), to_bytes_grid(image))

    def test_png_round_trip(self, tmp_path):
        rng = np.random.default_rng(8)
        image = StimulusImage(width=5, height=8, intensity=rng.uniform(0, 1, (8, 5)))
        path = tmp_path / "img.png"
        write_image(image, path)
        back = read_image(path)
        np.testing.assert_array_equal(to_bytes_grid(back), to_bytes_grid(image))
        assert png_bytes(image)[:4] == b"\x89PNG"

    def test_pgm_rejects_truncation(self, tmp_path):
        image = StimulusImage.blank(10, 10)
        path = tmp_path / "img.pgm"
        write_pgm(image, path)
        raw = path.read_bytes()
        path.write_bytes(raw[:-5])
        with pytest.raises(DataError):
            read_pgm(path)

    def test_unknown_extension_rejected(self, tmp_path):
        with pytest.raises(DataError):
            write_image(StimulusImage.blank(2, 2), tmp_path / "img.bmp")
