import math

import numpy as np
import pytest

from dmdl.nml import (
    GaussianNmlConfig,
    gaussian_mle,
    log_parametric_complexity,
    nml_codelength,
)

WIDE = GaussianNmlConfig(mu_max=10.0, sigma_min=0.001, sigma_max=100.0)


def test_config_validation():
    with pytest.raises(ValueError):
        GaussianNmlConfig(mu_max=0.0, sigma_min=0.1, sigma_max=1.0)
    with pytest.raises(ValueError):
        GaussianNmlConfig(mu_max=1.0, sigma_min=1.0, sigma_max=1.0)
    with pytest.raises(ValueError):
        GaussianNmlConfig(mu_max=1.0, sigma_min=0.1, sigma_max=1.0, d=3)


def test_data_driven_defaults():
    cfg = GaussianNmlConfig.from_data([0.0, 4.0])
    assert cfg.mu_max == 4.0
    assert cfg.sigma_min == pytest.approx(0.01)
    assert cfg.sigma_max == pytest.approx(200.0)
    small = GaussianNmlConfig.from_data([0.1, -0.2, 0.1])
    assert (small.mu_max, small.sigma_min, small.sigma_max) == (1.0, 0.005, 100.0)


def test_mle_constant_segment_clamps():
    mle = gaussian_mle([1, 1, 1], GaussianNmlConfig(mu_max=1, sigma_min=0.1, sigma_max=10))
    assert mle.mu_hat == 1.0
    assert mle.sigma_hat == 0.1
    assert mle.clamped


def test_mle_two_point():
    mle = gaussian_mle([0, 2], WIDE)
    assert (mle.mu_hat, mle.sigma_hat, mle.clamped) == (1.0, 1.0, False)


def test_mle_four_point():
    mle = gaussian_mle([0, 1, 2, 3], WIDE)
    assert mle.mu_hat == 1.5
    assert mle.sigma_hat == pytest.approx(math.sqrt(1.25), abs=1e-15)


def test_mle_empty_segment():
    with pytest.raises(ValueError, match="empty segment"):
        gaussian_mle([], WIDE)


def test_mle_upper_clamp():
    mle = gaussian_mle([-1e4, 1e4], WIDE)
    assert mle.sigma_hat == 100.0 and mle.clamped


def test_mle_reversal():
    x = np.random.default_rng(1).normal(size=37)
    a, b = gaussian_mle(x, WIDE), gaussian_mle(x[::-1], WIDE)
    assert a.mu_hat == pytest.approx(b.mu_hat, abs=1e-15)
    assert a.sigma_hat == pytest.approx(b.sigma_hat, abs=1e-15)


def test_clamp_monotone_in_spread():
    base = np.random.default_rng(2).normal(size=20)
    cfg = GaussianNmlConfig(mu_max=5, sigma_min=0.3, sigma_max=2.0)
    sigmas = [gaussian_mle(base * s, cfg).sigma_hat for s in np.linspace(0, 5, 60)]
    assert all(a <= b for a, b in zip(sigmas, sigmas[1:]))


def test_complexity_zero_offset_case():
    sigma_min = 0.37
    cfg = GaussianNmlConfig(mu_max=math.pi * sigma_min**2 / 16, sigma_min=sigma_min, sigma_max=10)
    assert cfg.complexity_offset == pytest.approx(0.0, abs=1e-15)
    assert log_parametric_complexity(2, cfg) == pytest.approx(-1 - 0.5 * math.log(math.pi), abs=1e-12)


# mpmath, 50 digits
@pytest.mark.parametrize("n, expected", [(2, -0.758435524729509), (3, -0.0778729196425628)])
def test_complexity_unit_config(n, expected):
    cfg = GaussianNmlConfig(mu_max=1, sigma_min=1, sigma_max=2)
    assert log_parametric_complexity(n, cfg) == pytest.approx(expected, abs=1e-12)


def test_complexity_three_points_closed_form():
    cfg = GaussianNmlConfig(mu_max=1, sigma_min=1, sigma_max=2)
    expected = 0.5 * math.log(16 / math.pi) + 1.5 * math.log(3 / (2 * math.e))
    assert log_parametric_complexity(3, cfg) == pytest.approx(expected, abs=1e-14)


def test_complexity_too_short():
    with pytest.raises(ValueError, match="segment too short for NML normalizer"):
        log_parametric_complexity(1, WIDE)
    with pytest.raises(ValueError, match="segment too short"):
        nml_codelength([1.0], WIDE)


def test_complexity_matches_oracle(oracles):
    for case in oracles["log_cn"]:
        cfg = GaussianNmlConfig(mu_max=case["mu_max"], sigma_min=case["sigma_min"], sigma_max=1e3)
        assert log_parametric_complexity(case["n"], cfg) == pytest.approx(case["value"], abs=1e-9), case


@pytest.mark.parametrize("n", [1000, 10000, 100000])
def test_complexity_asymptote(n):
    # log Gamma cancels the n/2 log(n/2e) term, leaving log(n/2) - log(2 pi)/2 + O(1/n)
    value = log_parametric_complexity(n, WIDE) - WIDE.complexity_offset
    assert value == pytest.approx(math.log(n / 2) - 0.5 * math.log(2 * math.pi), abs=1.0 / n)


@pytest.mark.xfail(strict=True, reason="log C_n grows like log n, so this ratio tends to 0, not 1/2")
@pytest.mark.parametrize("n", [1000, 10000, 100000])
def test_complexity_ratio_to_n_log_n(n):
    value = log_parametric_complexity(n, WIDE)
    assert value / (n * math.log(n)) == pytest.approx(0.5, rel=0.05)


def test_codelength_constant_segment():
    n = 7
    cfg = GaussianNmlConfig(mu_max=3, sigma_min=0.05, sigma_max=10)
    expected = 0.5 * n * math.log(2 * math.pi * 0.05**2) + log_parametric_complexity(n, cfg)
    assert nml_codelength([2.5] * n, cfg) == pytest.approx(expected, abs=1e-12)


def test_codelength_two_point():
    expected = math.log(2 * math.pi) + 1.0 + log_parametric_complexity(2, WIDE)
    assert nml_codelength([0, 2], WIDE) == pytest.approx(expected, abs=1e-12)


def test_codelength_matches_oracle(oracles):
    for case in oracles["nml"]:
        cfg = GaussianNmlConfig(mu_max=case["mu_max"], sigma_min=case["sigma_min"], sigma_max=case["sigma_max"])
        assert nml_codelength(case["x"], cfg) == pytest.approx(case["value"], abs=1e-9)


def test_codelength_shift_invariance():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.normal(size=rng.integers(2, 50))
        c = rng.uniform(-5, 5)
        assert nml_codelength(x + c, WIDE) == pytest.approx(nml_codelength(x, WIDE), abs=1e-9)
