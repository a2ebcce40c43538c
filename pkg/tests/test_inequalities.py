"""Numerical inequality suites behind the interleaving arguments.

Each inequality is sampled over at least 10^4 admissible random inputs
with slack 1e-9, using plain numpy arithmetic independent of the package
numerics.
"""

import numpy as np

SLACK = 1e-9
N_SAMPLES = 10_000


def sample_exponents(rng, n):
    return np.concatenate(
        [
            np.ones(n // 10),
            1.0 + rng.random(n - 2 * (n // 10)) * 7.0,
            np.full(n // 10, 40.0),
        ]
    )


def test_shifted_radius_gap_dominates_perturbation():
    # ((t+k)^p - (x+c*eps)^p)^(1/p) - (t^p - x^p)^(1/p) >= eps
    # with k = eps * (1 + c^p)^(1/p), for t >= x >= 0, c, eps >= 0
    rng = np.random.default_rng(101)
    n = N_SAMPLES
    p = sample_exponents(rng, n)
    x = rng.random(n) * 3.0
    t = x + rng.random(n) * 3.0
    c = rng.random(n) * 2.0
    eps = rng.random(n) * 2.0
    alpha = (1.0 + c**p) ** (1.0 / p)
    k = eps * alpha
    lhs = ((t + k) ** p - (x + c * eps) ** p) ** (1.0 / p) - np.where(
        t > x, (t**p - x**p) ** (1.0 / p), 0.0
    )
    assert np.all(lhs >= eps - SLACK)


def test_doubling_exponent_bound():
    # 2^(1 - 1/p) - 1 <= 1 - 1/p for all p >= 1
    rng = np.random.default_rng(102)
    p = np.concatenate([np.ones(100), 1.0 + rng.random(N_SAMPLES) * 99.0, [np.inf]])
    kappa = 1.0 - 1.0 / p
    kappa[np.isinf(p)] = 1.0
    assert np.all(2.0**kappa - 1.0 <= kappa + SLACK)


def test_right_trapezoid_projection_bound():
    # ||g - q(x)||^2 <= ||x - g||^2 + ||x - q(x)|| (2||g - q(g)|| - ||x - q(x)||)
    # for projections q onto any affine line
    rng = np.random.default_rng(103)
    checked = 0
    while checked < N_SAMPLES:
        d = int(rng.integers(2, 4))
        g = rng.normal(size=d) * 2
        x = rng.normal(size=d) * 2
        base = rng.normal(size=d)
        direction = rng.normal(size=d)
        direction /= np.linalg.norm(direction)

        def proj(z):
            return base + np.dot(z - base, direction) * direction

        qg, qx = proj(g), proj(x)
        lhs = np.dot(g - qx, g - qx)
        hx = np.linalg.norm(x - qx)
        rhs = np.dot(x - g, x - g) + hx * (2.0 * np.linalg.norm(g - qg) - hx)
        assert lhs <= rhs + SLACK
        checked += 1


def test_power_mean_kappa_bound():
    # (a^p - d^p)^(2/p) + d(2b - d) <= (a + kappa*b)^2 for 0 <= b,d <= a
    rng = np.random.default_rng(104)
    n = N_SAMPLES
    p = sample_exponents(rng, n)
    a = rng.random(n) * 3.0 + 1e-12
    b = rng.random(n) * a
    d = rng.random(n) * a
    kappa = 1.0 - 1.0 / p
    inner = np.maximum(a**p - d**p, 0.0)
    lhs = inner ** (2.0 / p) + d * (2.0 * b - d)
    rhs = (a + kappa * b) ** 2
    assert np.all(lhs <= rhs + SLACK)
