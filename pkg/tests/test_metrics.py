import json
import math

import numpy as np
import pytest

from dtmfilt import (
    DimensionMismatchError,
    DiscreteMeasure,
    ParameterError,
    PersistenceDiagram,
    PointCloud,
    bottleneck,
    bound_p44,
    bound_p48,
    bound_t46,
    bound_t413,
    c_const,
    certify,
    combine_terms,
    synth,
    wasserstein2,
)
from dtmfilt.metrics import StabilityReport
from _oracles import bottleneck_exhaustive, w2_1d_quantile, w2_uniform_exhaustive


def diagram(points, dims=None):
    points = list(points)
    dims = dims or [0] * len(points)
    return PersistenceDiagram(
        np.asarray(dims, dtype=np.int32),
        np.asarray([b for b, _ in points], dtype=float),
        np.asarray([d for _, d in points], dtype=float),
    )


def uniform(points):
    return DiscreteMeasure.uniform(PointCloud(points))


class TestBottleneck:
    def test_identical(self):
        d = diagram([(0.0, 1.0), (0.5, 2.0)])
        assert bottleneck(d, d, 0) == 0.0

    def test_single_point_to_diagonal(self):
        assert bottleneck(diagram([(0.0, 1.0)]), diagram([]), 0) == 0.5

    def test_direct_match_beats_diagonal(self):
        assert bottleneck(diagram([(0.0, 2.0)]), diagram([(0.0, 3.0)]), 0) == 1.0

    def test_essential_count_mismatch(self):
        d1 = diagram([(0.0, math.inf)])
        d2 = diagram([])
        assert bottleneck(d1, d2, 0) == math.inf

    def test_essential_birth_matching(self):
        d1 = diagram([(0.0, math.inf), (1.0, math.inf)])
        d2 = diagram([(0.2, math.inf), (1.3, math.inf)])
        assert bottleneck(d1, d2, 0) == pytest.approx(0.3)

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            ds = []
            for _ in range(3):
                k = int(rng.integers(0, 5))
                b = rng.random(k)
                d = b + rng.random(k)
                ds.append(diagram(list(zip(b, d))))
            ab = bottleneck(ds[0], ds[1], 0)
            ba = bottleneck(ds[1], ds[0], 0)
            assert ab == ba
            bc = bottleneck(ds[1], ds[2], 0)
            ac = bottleneck(ds[0], ds[2], 0)
            assert ac <= ab + bc + 1e-9

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(32)
        for _ in range(60):
            k1, k2 = int(rng.integers(0, 6)), int(rng.integers(0, 6))
            P = [(float(b), float(b + rng.random() + 0.01)) for b in rng.random(k1)]
            Q = [(float(b), float(b + rng.random() + 0.01)) for b in rng.random(k2)]
            got = bottleneck(diagram(P), diagram(Q), 0)
            want = bottleneck_exhaustive(P, Q)
            assert got == pytest.approx(want, abs=1e-12)

    def test_dimension_restriction(self):
        d1 = diagram([(0.0, 1.0), (0.0, 9.0)], dims=[0, 1])
        d2 = diagram([(0.0, 1.0)], dims=[0])
        assert bottleneck(d1, d2, 0) == 0.0
        assert bottleneck(d1, d2, 1) == 4.5


class TestWasserstein2:
    def test_identical_measure(self):
        mu = uniform([[0.0], [0.0]])
        assert wasserstein2(mu, mu) == 0.0

    def test_singletons(self):
        assert wasserstein2(uniform([[0.0]]), uniform([[3.0]])) == pytest.approx(3.0)

    def test_split_mass(self):
        got = wasserstein2(uniform([[0.0], [0.0]]), uniform([[0.0], [4.0]]))
        assert got == pytest.approx(2 * math.sqrt(2.0), abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            a = uniform(rng.normal(size=(int(rng.integers(1, 6)), 2)))
            b = uniform(rng.normal(size=(int(rng.integers(1, 6)), 2)))
            assert wasserstein2(a, b) == pytest.approx(wasserstein2(b, a), abs=1e-10)

    def test_matches_exhaustive_assignment(self):
        rng = np.random.default_rng(34)
        for _ in range(40):
            n = int(rng.integers(1, 7))
            xs = rng.normal(size=(n, 2))
            ys = rng.normal(size=(n, 2))
            got = wasserstein2(uniform(xs), uniform(ys))
            want = w2_uniform_exhaustive(xs.tolist(), ys.tolist())
            assert got == pytest.approx(want, abs=1e-9)

    def test_matches_1d_quantile_oracle(self):
        rng = np.random.default_rng(35)
        for _ in range(25):
            na, nb = int(rng.integers(1, 6)), int(rng.integers(1, 6))
            xa = rng.normal(size=(na, 1))
            xb = rng.normal(size=(nb, 1))
            wa = rng.integers(1, 6, size=na).astype(float)
            wb = rng.integers(1, 6, size=nb).astype(float)
            mu = DiscreteMeasure(PointCloud(xa), wa / wa.sum())
            nu = DiscreteMeasure(PointCloud(xb), wb / wb.sum())
            got = wasserstein2(mu, nu)
            want = w2_1d_quantile(xa.tolist(), mu.masses, xb.tolist(), nu.masses)
            assert got == pytest.approx(want, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            wasserstein2(uniform([[0.0]]), uniform([[0.0, 1.0]]))

    def test_irrational_mass_snaps_within_tolerance(self):
        # continued-fraction approximations put 1/sqrt(2) within 1e-13 of the
        # rational grid, so it is accepted
        mu = DiscreteMeasure(PointCloud([[0.0], [1.0]]), [1 / math.sqrt(2), 1 - 1 / math.sqrt(2)])
        assert wasserstein2(mu, mu) == 0.0

    def test_unsnappable_mass_rejected(self):
        # 0.50000005 sits 5e-8 from 1/2 and further from every other
        # fraction with denominator <= 1e6
        mu = DiscreteMeasure(PointCloud([[0.0], [1.0]]), [0.50000005, 0.49999995])
        with pytest.raises(ParameterError):
            wasserstein2(mu, uniform([[3.0]]))


class TestBounds:
    def test_combine_arithmetic(self):
        terms = {"w2_x_y": 0.3, "d_h_x_y": 0.1}
        assert combine_terms("P4.4", 0.25, 1.0, terms) == pytest.approx(0.8)
        assert combine_terms("P4.4", 0.25, math.inf, terms) == pytest.approx(0.7)

    def test_p44_identical_measures(self):
        mu = uniform([[0.0, 0.0], [1.0, 1.0]])
        rep = bound_p44(mu, mu, 0.5, 2.0)
        assert rep.bound == 0.0
        rep.validate()

    def test_t46_all_equal(self):
        g = PointCloud([[0.0], [1.0], [3.0]])
        rep = bound_t46(g, g, g, g, m=0.5)
        assert rep.bound == pytest.approx(2 * c_const(DiscreteMeasure.uniform(g), 0.5))
        assert rep.terms["w2_x_gamma"] == 0.0

    def test_t46_singleton(self):
        s = PointCloud([[0.0]])
        assert bound_t46(s, s, s, s, m=0.5).bound == 0.0

    def test_t46_two_set_drops_third_term(self):
        x = PointCloud([[0.0], [1.0], [5.0]])
        g = PointCloud([[0.0], [1.0]])
        rep = bound_t46(x, g, g, m=0.3)
        assert "w2_omega_y" not in rep.terms
        assert rep.theorem == "T4.6"

    def test_t46_subset_violation_names_point(self):
        x = PointCloud([[0.0], [1.0]])
        g = PointCloud([[2.0]])
        with pytest.raises(ParameterError, match="point 0"):
            bound_t46(x, g, m=0.5)

    def test_t413_p1_matches_t46(self):
        rng = np.random.default_rng(36)
        x = PointCloud(rng.normal(size=(6, 2)))
        g = PointCloud(x.points[:3])
        a = bound_t46(x, g, m=0.4).bound
        b = bound_t413(x, g, m=0.4, p=1.0).bound
        assert a == b

    def test_t413_two_point_example(self):
        g = PointCloud([[-1.0], [1.0]])
        rep = bound_t413(g, g, g, g, m=0.5, p=2.0)
        assert rep.bound == pytest.approx(1.0, abs=1e-5)

    def test_p48_self(self):
        x = PointCloud([[0.0], [2.0]])
        mu = DiscreteMeasure.uniform(x)
        rep = bound_p48(mu, x, 0.75)
        assert rep.terms["w2_mu_mu_x"] == 0.0
        assert rep.terms["epsilon"] == 0.0
        assert rep.bound == pytest.approx(c_const(mu, 0.75))

    def test_p48_support_inside_cloud(self):
        mu = uniform([[-1.0], [1.0]])
        x = PointCloud([[-1.0], [0.0], [1.0]])
        rep = bound_p48(mu, x, 0.75)
        assert rep.terms["epsilon"] == 0.0
        assert rep.bound == pytest.approx(
            rep.terms["w2_mu_mu_x"] / math.sqrt(0.75) + 2.0 / math.sqrt(3.0), abs=1e-12
        )

    def test_report_validation_catches_drift(self):
        rep = StabilityReport("T4.6", 0.5, 1.0, {"w2_x_gamma": 0.0, "w2_gamma_omega": 0.0, "c_gamma": 0.1, "c_omega": 0.1}, 0.5)
        with pytest.raises(ParameterError):
            rep.validate()


class TestCertify:
    def test_identical_clouds_trivially_satisfied(self):
        x = PointCloud([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        rep = certify("T4.6", x=x, gamma=x, m=0.5, dims=(0,))
        assert rep.measured_bottleneck == 0.0
        assert rep.satisfied is True
        rep.validate()

    def test_small_outlier_run_satisfied(self):
        gamma = synth("circle", 24, seed=3)
        x = synth("circle-with-outliers", 24, 6, seed=3)
        rep = certify("T4.6", x=x, gamma=gamma, omega=gamma, m=0.25, max_dim=2, dims=(0, 1))
        assert rep.satisfied is True
        rep.validate()

    def test_t413_small_run_satisfied(self):
        gamma = synth("circle", 18, seed=4)
        x = synth("circle-with-outliers", 18, 5, seed=4)
        for p in (2.0, math.inf):
            rep = certify("T4.13", x=x, gamma=gamma, omega=gamma, m=0.25, p=p, max_dim=2, dims=(0, 1))
            assert rep.satisfied is True

    def test_p44_measures(self):
        mu = DiscreteMeasure(PointCloud([[-1.0], [1.0]]), [0.2, 0.8])
        nu = DiscreteMeasure(PointCloud([[-1.0], [1.0]]), [0.25, 0.75])
        rep = certify("P4.4", mu=mu, nu=nu, m=0.3, p=1.0, dims=(0,))
        assert rep.satisfied is True
        assert set(rep.terms) == {"w2_x_y", "d_h_x_y"}

    def test_p48_bound_only(self):
        mu = uniform([[-1.0], [1.0]])
        x = PointCloud([[-1.0], [0.0], [1.0]])
        rep = certify("P4.8-bound", mu=mu, x=x, m=0.75)
        assert rep.measured_bottleneck is None
        assert rep.satisfied is None

    def test_json_is_flat_with_named_terms(self):
        x = PointCloud([[0.0], [1.0]])
        rep = certify("T4.6", x=x, gamma=x, m=0.5, dims=(0,))
        payload = json.loads(rep.to_json())
        for key in ("theorem", "m", "p", "w2_x_gamma", "w2_gamma_omega", "c_gamma", "c_omega", "bound", "measured_bottleneck", "satisfied"):
            assert key in payload
        assert not any(isinstance(v, dict) for v in payload.values())

    def test_unknown_theorem(self):
        with pytest.raises(ParameterError):
            certify("T9.9", x=PointCloud([[0.0]]), gamma=PointCloud([[0.0]]), m=0.5)


class TestNoGlobalTransportBound:
    def test_bottleneck_floor_as_transport_vanishes(self):
        # skewed two- and three-point measures keep a positive diagram gap
        # while the transport distance between them goes to zero
        from dtmfilt import build_weighted_cech, dtm_values, reduce

        q, m, x_new = 0.2, 0.3, -0.1
        mu = DiscreteMeasure(PointCloud([[-1.0], [1.0]]), [q, 1 - q])
        w_mu = dtm_values(mu, mu.support.points, m)
        K_mu = build_weighted_cech(mu.support, w_mu, 1.0, 1, None)
        D_mu = reduce(K_mu, (0,))
        gaps = []
        transports = []
        for eps in (0.05, 0.01, 0.002):
            nu = DiscreteMeasure(
                PointCloud([[-1.0], [1.0], [x_new]]), [q - eps, 1 - q, eps]
            )
            w_nu = dtm_values(nu, nu.support.points, m)
            K_nu = build_weighted_cech(nu.support, w_nu, 1.0, 1, None)
            D_nu = reduce(K_nu, (0,))
            gaps.append(bottleneck(D_mu, D_nu, 0))
            transports.append(wasserstein2(mu, nu))
        assert all(g > 0.5 * gaps[0] for g in gaps)
        assert transports[0] > transports[1] > transports[2]
        assert transports[2] < 0.05
