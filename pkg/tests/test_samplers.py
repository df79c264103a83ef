import math

import numpy as np
import pytest
from scipy import integrate, stats

from gensanity import RandomSource
from gensanity.samplers import (
    BallUniform,
    GaussianMixture,
    HypercubeUniform,
    HypersphereSurface,
    IsotropicGaussian,
    ParetoTail,
    ProductOf,
    RoundedScaledGaussian1D,
    ScaledGaussian1D,
    TorusCircle,
    WithOutlier,
    gaussian_mean_hellinger_sq,
    gaussian_std_hellinger_sq,
    gaussian_tv_numeric,
    hypercube_offset,
    sample,
    spec_dim,
    spec_from_json,
    spec_to_json,
    tv_bounds_from_hellinger_sq,
)


def _draw(spec, n=2000, label="t"):
    return sample(spec, n, RandomSource(99).child(label))


def test_gaussian_moments():
    x = _draw(IsotropicGaussian(dim=3, mean=2.0, std=0.5), n=20000)
    assert x.shape == (20000, 3)
    np.testing.assert_allclose(x.mean(axis=0), [2.0] * 3, atol=0.02)
    np.testing.assert_allclose(x.std(axis=0), [0.5] * 3, atol=0.02)


def test_gaussian_tuple_mean():
    x = _draw(IsotropicGaussian(dim=2, mean=(1.0, -3.0), std=1.0), n=20000)
    np.testing.assert_allclose(x.mean(axis=0), [1.0, -3.0], atol=0.05)


def test_mixture_weights_and_means():
    spec = GaussianMixture(means=((0.0,), (10.0,)), std=0.1, weights=(0.25, 0.75))
    x = _draw(spec, n=40000)
    frac_high = float(np.mean(x[:, 0] > 5.0))
    assert frac_high == pytest.approx(0.75, abs=0.01)


def test_hypersphere_points_sit_on_the_surface():
    x = _draw(HypersphereSurface(dim=8, radius=1.3), n=500)
    np.testing.assert_allclose(np.linalg.norm(x, axis=1), 1.3, atol=1e-12)


def test_ball_uniform_stays_inside_radius():
    x = _draw(BallUniform(radius=0.8, dim=3), n=4000)
    r = np.linalg.norm(x, axis=1)
    assert np.all(r <= 0.8 + 1e-12)
    # uniform in volume: E[r^3 / R^3] = 1/2
    assert np.mean((r / 0.8) ** 3) == pytest.approx(0.5, abs=0.02)


def test_torus_surface_identity():
    spec = TorusCircle(major=1.0, minor=0.1)
    x = _draw(spec, n=1000)
    lhs = (np.sqrt(x[:, 0] ** 2 + x[:, 1] ** 2) - 1.0) ** 2 + x[:, 2] ** 2
    np.testing.assert_allclose(lhs, 0.01, atol=1e-12)


def test_pareto_tail_quantiles():
    alpha = 1.01
    x = _draw(ParetoTail(alpha=alpha, scale=1.0), n=40000)[:, 0]
    assert np.all(x >= 1.0)
    # inverse-CDF sampling: median is scale * 2**(1/alpha)
    assert np.median(x) == pytest.approx(2.0 ** (1.0 / alpha), rel=0.02)
    ks = stats.kstest(x, "pareto", args=(alpha,))
    assert ks.pvalue > 0.01


def test_rounded_gaussian_is_integer_valued():
    x = _draw(RoundedScaledGaussian1D(scale=10.0), n=500)
    np.testing.assert_array_equal(x, np.round(x))
    y = _draw(ScaledGaussian1D(scale=10.0), n=20000)
    assert y[:, 0].std() == pytest.approx(10.0, rel=0.02)


def test_product_pairs_independent_parts():
    spec = ProductOf((ScaledGaussian1D(scale=1.0), IsotropicGaussian(dim=2, mean=0.0, std=1.0)))
    assert spec_dim(spec) == 3
    x = _draw(spec, n=1000)
    assert x.shape == (1000, 3)


def test_with_outlier_appends_one_row():
    spec = WithOutlier(base=IsotropicGaussian(dim=2, mean=0.0, std=1.0), point=(9.0, 9.0))
    x = _draw(spec, n=100)
    assert x.shape == (101, 2)
    np.testing.assert_array_equal(x[-1], [9.0, 9.0])


def test_sampling_is_deterministic_per_stream():
    spec = IsotropicGaussian(dim=4, mean=0.0, std=1.0)
    a = sample(spec, 50, RandomSource(3).child("x"))
    b = sample(spec, 50, RandomSource(3).child("x"))
    np.testing.assert_array_equal(a, b)


def test_spec_json_round_trip():
    specs = [
        IsotropicGaussian(dim=8, mean=(1.0,) * 8, std=2.0),
        GaussianMixture(means=((0.0, 0.0), (3.0, 4.0)), std=0.25, weights=(0.5, 0.5)),
        HypercubeUniform(dim=3, offset=0.2),
        WithOutlier(base=IsotropicGaussian(dim=2, mean=0.0, std=1.0), point=(6.0, 6.0)),
        ProductOf((ScaledGaussian1D(scale=2.0), RoundedScaledGaussian1D(scale=2.0))),
        TorusCircle(),
        ParetoTail(),
    ]
    for spec in specs:
        assert spec_from_json(spec_to_json(spec)) == spec


class TestHypercubeOffset:
    def test_one_dimensional_offset(self):
        assert hypercube_offset(1) == pytest.approx(0.8, abs=1e-15)

    def test_eight_dimensional_offset(self):
        # 1 - 0.2**(1/8): the shifted cube keeps 20% overlapping volume
        assert hypercube_offset(8) == pytest.approx(1.0 - 0.2 ** 0.125, abs=1e-15)
        overlap = (1.0 - hypercube_offset(8)) ** 8
        assert overlap == pytest.approx(0.2, abs=1e-12)

    def test_offset_sampling(self):
        x = _draw(HypercubeUniform(dim=2, offset=0.5), n=3000)
        assert np.all(x >= 0.5 - 1e-12)
        assert np.all(x <= 1.5 + 1e-12)


class TestRangeBounds:
    def test_mean_difference_hellinger_formula(self):
        # one-dimensional cross-check against direct numeric integration
        mu = 1.7
        f = lambda x: (stats.norm.pdf(x) * stats.norm.pdf(x - mu)) ** 0.5
        bc, _ = integrate.quad(f, -40, 40)
        assert gaussian_mean_hellinger_sq(mu, 1) == pytest.approx(1 - bc, abs=1e-9)

    def test_std_difference_hellinger_formula(self):
        s = 3.0
        f = lambda x: (stats.norm.pdf(x) * stats.norm.pdf(x, scale=s) ) ** 0.5
        bc, _ = integrate.quad(f, -60, 60)
        assert gaussian_std_hellinger_sq(s, 1) == pytest.approx(1 - bc, abs=1e-9)

    def test_bounds_bracket_numeric_tv(self, rng):
        for _ in range(10):
            mu = float(rng.uniform(0.1, 6.0))
            lo, hi = tv_bounds_from_hellinger_sq(gaussian_mean_hellinger_sq(mu, 1))
            tv = gaussian_tv_numeric("mean", mu)
            assert lo - 1e-4 <= tv <= hi + 1e-4
            s = float(10.0 ** rng.uniform(-3, 3))
            lo, hi = tv_bounds_from_hellinger_sq(gaussian_std_hellinger_sq(s, 1))
            tv = gaussian_tv_numeric("std", s)
            assert lo - 1e-4 <= tv <= hi + 1e-4

    def test_mean_tv_closed_form(self):
        # TV between N(0,1) and N(mu,1) is 2*Phi(mu/2) - 1
        mu = 2.3
        expected = 2.0 * stats.norm.cdf(mu / 2.0) - 1.0
        assert gaussian_tv_numeric("mean", mu) == pytest.approx(expected, abs=1e-9)

    def test_separation_at_sweep_extremes(self):
        for dim, reach in ((1, 6.0), (8, 3.0), (64, 1.0)):
            lo, _ = tv_bounds_from_hellinger_sq(gaussian_mean_hellinger_sq(reach, dim))
            assert lo >= 0.95
        for dim, expo in ((1, 3.0), (8, 1.0), (64, 0.5)):
            lo, _ = tv_bounds_from_hellinger_sq(gaussian_std_hellinger_sq(10.0 ** expo, dim))
            assert lo >= 0.95


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        sample(IsotropicGaussian(dim=0, mean=0.0, std=1.0), 10, RandomSource(0))
    with pytest.raises(ValueError):
        ragged = GaussianMixture(means=((0.0,), (1.0, 2.0)), std=1.0, weights=(0.5, 0.5))
        sample(ragged, 10, RandomSource(0))


def test_spec_dim_matches_samples():
    specs = [
        IsotropicGaussian(dim=5, mean=0.0, std=1.0),
        HypersphereSurface(dim=7, radius=1.0),
        TorusCircle(),
        ParetoTail(),
        ProductOf((ScaledGaussian1D(scale=1.0), ParetoTail())),
    ]
    for spec in specs:
        x = _draw(spec, n=8, label=str(spec))
        assert x.shape[1] == spec_dim(spec)


def test_mean_hellinger_matches_dimension_scaling():
    # independent coordinates multiply Bhattacharyya coefficients
    one = 1.0 - gaussian_mean_hellinger_sq(0.9, 1)
    eight = 1.0 - gaussian_mean_hellinger_sq(0.9, 8)
    assert eight == pytest.approx(one ** 8, rel=1e-12)
    assert gaussian_mean_hellinger_sq(1.2, 4) == pytest.approx(
        1.0 - math.exp(-4 * 1.2 ** 2 / 8.0), abs=1e-15
    )
