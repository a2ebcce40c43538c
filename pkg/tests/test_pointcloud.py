import math

import numpy as np
import pytest

from dtmfilt import (
    DimensionMismatchError,
    DiscreteMeasure,
    ParameterError,
    ParseError,
    PointCloud,
    delay_embedding,
    hausdorff,
    load_points,
    pairwise_distances,
    synth,
)


def write(tmp_path, text, name="pts.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadPoints:
    def test_plain_two_points(self, tmp_path):
        cloud = load_points(write(tmp_path, "0,0\n1,0\n"))
        assert isinstance(cloud, PointCloud)
        assert cloud.dim == 2
        assert np.array_equal(cloud.points, [[0.0, 0.0], [1.0, 0.0]])

    def test_weighted_uniform(self, tmp_path):
        mu = load_points(write(tmp_path, "0,0.5\n1,0.5\n"), weighted=True)
        assert isinstance(mu, DiscreteMeasure)
        assert mu.dim == 1
        assert np.allclose(mu.masses, [0.5, 0.5])

    def test_weighted_renormalizes(self, tmp_path):
        mu = load_points(write(tmp_path, "0,2\n1,2\n"), weighted=True)
        assert np.allclose(mu.masses, [0.5, 0.5])

    def test_crlf_accepted(self, tmp_path):
        cloud = load_points(write(tmp_path, "0,0\r\n1,0\r\n"))
        assert len(cloud) == 2

    def test_ragged_row_names_line(self, tmp_path):
        with pytest.raises(ParseError, match="line 2"):
            load_points(write(tmp_path, "0,0\n1\n"))

    def test_non_numeric_names_line(self, tmp_path):
        with pytest.raises(ParseError, match="line 3"):
            load_points(write(tmp_path, "0,0\n1,1\nx,1\n"))

    def test_nonpositive_mass(self, tmp_path):
        with pytest.raises(ParseError, match="line 2"):
            load_points(write(tmp_path, "0,1\n1,0\n"), weighted=True)

    def test_empty_file(self, tmp_path):
        with pytest.raises(ParseError, match="line 1"):
            load_points(write(tmp_path, ""))


class TestPairwiseDistances:
    def test_three_four_five(self):
        d = pairwise_distances(PointCloud([[0.0, 0.0], [3.0, 4.0]]))
        assert d[0, 1] == 5.0
        assert d[1, 0] == 5.0
        assert d[0, 0] == 0.0

    def test_single_point(self):
        d = pairwise_distances(PointCloud([[0.0]]))
        assert d.shape == (1, 1) and d[0, 0] == 0.0

    def test_line_points(self):
        d = pairwise_distances(PointCloud([[0.0], [1.0], [3.0]]))
        assert np.array_equal(d, [[0, 1, 3], [1, 0, 2], [3, 2, 0]])

    def test_triangle_inequality_sampled(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(30, 3))
        d = pairwise_distances(PointCloud(pts))
        idx = rng.integers(0, 30, size=(500, 3))
        for i, j, k in idx:
            assert d[i, j] <= d[i, k] + d[k, j] + 1e-9


class TestHausdorff:
    def test_identical(self):
        x = PointCloud([[0.0, 1.0], [2.0, 2.0]])
        assert hausdorff(x, x) == 0.0

    def test_one_sided(self):
        assert hausdorff(PointCloud([[0.0]]), PointCloud([[0.0], [5.0]])) == 5.0

    def test_midpoint(self):
        assert hausdorff(PointCloud([[0.0], [1.0]]), PointCloud([[0.5]])) == 0.5

    def test_symmetry_and_brute_force(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            x = rng.normal(size=(rng.integers(1, 8), 2))
            y = rng.normal(size=(rng.integers(1, 8), 2))
            got = hausdorff(PointCloud(x), PointCloud(y))
            assert got == hausdorff(PointCloud(y), PointCloud(x))
            sup_x = max(min(np.linalg.norm(a - b) for b in y) for a in x)
            sup_y = max(min(np.linalg.norm(a - b) for a in x) for b in y)
            assert got == pytest.approx(max(sup_x, sup_y), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            hausdorff(PointCloud([[0.0]]), PointCloud([[0.0, 0.0]]))


class TestDelayEmbedding:
    def test_three_windows(self):
        cloud = delay_embedding([1, 2, 3, 4, 5], dim=3, stride=1)
        assert np.array_equal(cloud.points, [[1, 2, 3], [2, 3, 4], [3, 4, 5]])

    def test_identity_embedding(self):
        cloud = delay_embedding([1, 2], dim=1)
        assert np.array_equal(cloud.points, [[1], [2]])

    def test_stride_two(self):
        cloud = delay_embedding([1, 2, 3, 4, 5], dim=2, stride=2)
        assert np.array_equal(cloud.points, [[1, 3], [2, 4], [3, 5]])

    def test_output_size_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            n = int(rng.integers(1, 40))
            dim = int(rng.integers(1, 6))
            stride = int(rng.integers(1, 4))
            if n - (dim - 1) * stride < 1:
                with pytest.raises(ParameterError):
                    delay_embedding(rng.normal(size=n), dim, stride)
            else:
                out = delay_embedding(rng.normal(size=n), dim, stride)
                assert len(out) == n - (dim - 1) * stride

    def test_too_short(self):
        with pytest.raises(ParameterError):
            delay_embedding([1.0, 2.0], dim=3, stride=1)


class TestSynth:
    def test_circle_on_circle(self):
        cloud = synth("circle", 4, seed=3)
        radii = np.linalg.norm(cloud.points, axis=1)
        assert np.all(np.abs(radii - 1.0) <= 1e-12)

    def test_square_range(self):
        cloud = synth("square", 10, seed=3)
        assert np.all(cloud.points >= -1.0) and np.all(cloud.points <= 1.0)

    def test_union_count(self):
        cloud = synth("circle-with-outliers", 300, outliers=50, seed=1)
        assert len(cloud) == 350

    def test_circle_prefix_matches(self):
        full = synth("circle-with-outliers", 40, outliers=7, seed=11)
        circle = synth("circle", 40, seed=11)
        assert np.array_equal(full.points[:40], circle.points)

    def test_deterministic(self):
        a = synth("circle-with-outliers", 25, outliers=5, seed=42)
        b = synth("circle-with-outliers", 25, outliers=5, seed=42)
        assert np.array_equal(a.points, b.points)

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            synth("torus", 5)


class TestDiscreteMeasure:
    def test_uniform(self):
        mu = DiscreteMeasure.uniform(PointCloud([[0.0], [1.0], [2.0]]))
        assert np.allclose(mu.masses, 1 / 3)
        assert mu.is_uniform

    def test_mass_validation(self):
        cloud = PointCloud([[0.0], [1.0]])
        with pytest.raises(ParameterError):
            DiscreteMeasure(cloud, [0.5, 0.6])
        with pytest.raises(ParameterError):
            DiscreteMeasure(cloud, [1.0, 0.0])
        with pytest.raises(ParameterError):
            DiscreteMeasure(cloud, [0.5])

    def test_points_are_frozen(self):
        cloud = PointCloud([[0.0], [1.0]])
        with pytest.raises(ValueError):
            cloud.points[0, 0] = 7.0

    def test_nan_rejected(self):
        with pytest.raises(ParameterError):
            PointCloud([[math.nan]])
