import math

import numpy as np
import pytest

from dmdl.growth import (
    cumulative_from_daily,
    first_positive,
    fit_loglinear,
    growth_direction,
    log_cumulative,
    residual_config,
    residual_cut_scores,
    residual_dmdl0,
    residual_dmdl1,
    residual_dmdl2,
    residual_profile,
)
from dmdl.nml import GaussianNmlConfig, log_parametric_complexity
from dmdl.pipeline import ingest_ecdc
from dmdl.stats import admissible_cuts

CFG = GaussianNmlConfig(mu_max=1.0, sigma_min=1e-4, sigma_max=10.0)


def test_exact_exponential_fit():
    t = np.arange(30)
    fit = fit_loglinear(math.log(2) + 0.1 * t)
    assert fit.r == pytest.approx(0.1, abs=1e-12)
    assert fit.log_c0 == pytest.approx(math.log(2), abs=1e-12)
    assert np.max(np.abs(fit.residuals)) < 1e-12


def test_two_point_fit():
    fit = fit_loglinear([math.log(1), math.log(math.e)])
    assert fit.r == pytest.approx(1.0, abs=1e-15)
    assert fit.log_c0 == pytest.approx(0.0, abs=1e-15)


def test_fit_too_short():
    with pytest.raises(ValueError):
        fit_loglinear([1.0])


def test_fit_matches_normal_equations():
    rng = np.random.default_rng(3)
    for _ in range(25):
        m = int(rng.integers(2, 80))
        t0 = int(rng.integers(0, 100))
        y = 2.0 + 0.07 * np.arange(t0, t0 + m) + rng.normal(scale=0.1, size=m)
        A = np.column_stack((np.ones(m), np.arange(t0, t0 + m)))
        (c0, r), *_ = np.linalg.lstsq(A, y, rcond=None)
        fit = fit_loglinear(y, t0=t0)
        assert fit.r == pytest.approx(r, abs=1e-12)
        assert abs(np.mean(fit.residuals)) < 1e-10
        assert fit.sse == pytest.approx(float(np.sum(fit.residuals**2)), abs=1e-15)


def test_fit_matches_oracle(oracles):
    for case in oracles["loglinear"]:
        fit = fit_loglinear(case["y"], t0=case["t0"])
        assert fit.r == pytest.approx(case["r"], abs=1e-9)
        assert fit.log_c0 == pytest.approx(case["log_c0"], abs=1e-9)
        assert fit.sse == pytest.approx(case["sse"], abs=1e-9)


def test_exact_exponential_window_is_pure_complexity():
    y = math.log(3) + 0.2 * np.arange(20)
    cut = 8
    C = lambda m: log_parametric_complexity(m, CFG)  # noqa: E731
    expected = (C(20) - C(cut) - C(20 - cut)) / 20
    assert residual_dmdl0(y, cut, CFG) == pytest.approx(expected, abs=1e-9)
    assert expected < 0


def test_piecewise_exponential_true_cut_wins():
    t = np.arange(40)
    # knot between samples so no point lies on both lines
    y = np.where(t < 20, 0.05 * t, 0.05 * 19.5 + 0.25 * (t - 19.5))
    scores = {c: residual_dmdl0(y, c, CFG) for c in range(2, 39)}
    best = max(scores, key=scores.get)
    assert best == 20
    assert all(scores[20] > v for c, v in scores.items() if c != 20)
    assert growth_direction(y, 20) == "up"


def test_direction_down_and_none():
    t = np.arange(30)
    y = np.where(t < 15, 0.3 * t, 0.3 * 15 + 0.05 * (t - 15))
    assert growth_direction(y, 15) == "down"
    assert growth_direction(0.1 * t, 15) == "none"


def test_scale_invariance_of_counts():
    rng = np.random.default_rng(4)
    wide = GaussianNmlConfig(mu_max=10.0, sigma_min=1e-6, sigma_max=100.0)
    daily = rng.poisson(np.exp(0.1 * np.arange(50)) * 5)
    y = log_cumulative(cumulative_from_daily(daily))
    y_scaled = log_cumulative(cumulative_from_daily(daily * 7.5))
    for cut in (5, 20, 33):
        assert residual_dmdl0(y_scaled, cut, wide) == pytest.approx(residual_dmdl0(y, cut, wide), abs=1e-9)


def test_difference_orders():
    rng = np.random.default_rng(5)
    y = np.cumsum(rng.uniform(0.05, 0.2, 30))
    assert residual_dmdl1(y, 10, CFG) == residual_dmdl0(y, 11, CFG) - residual_dmdl0(y, 10, CFG)
    assert residual_dmdl2(y, 10, CFG) == pytest.approx(
        residual_dmdl1(y, 10, CFG) - residual_dmdl1(y, 9, CFG), abs=1e-14
    )
    with pytest.raises(ValueError):
        residual_dmdl0(y, 1, CFG)


def test_batched_residual_scores():
    rng = np.random.default_rng(6)
    rows = np.cumsum(rng.uniform(0.0, 0.3, size=(4, 25)), axis=1)
    cuts = admissible_cuts(25)
    batched = residual_cut_scores(rows, cuts, CFG)
    for r, row in enumerate(rows):
        direct = [residual_dmdl0(row, c, CFG) for c in cuts]
        assert batched[r] == pytest.approx(direct, abs=1e-8)
        assert residual_profile(row, CFG)[cuts] == pytest.approx(direct, abs=1e-8)
    assert np.isnan(residual_profile(rows[0, :3], CFG)).all()


def test_residual_config_defaults():
    cfg = residual_config([0.0])
    assert cfg.sigma_min == 0.005
    cfg = residual_config(0.1 * np.arange(10) + np.tile([0.0, 0.02], 5))
    assert cfg.mu_max == 1.0


def test_cumulative_examples():
    c = cumulative_from_daily([0, 0, 1, 2])
    assert c.tolist() == [0, 0, 1, 3]
    assert first_positive(c) == 2
    assert log_cumulative(c) == pytest.approx([0.0, math.log(3)])
    assert log_cumulative(cumulative_from_daily([5])) == pytest.approx([math.log(5)])


def test_cumulative_errors():
    with pytest.raises(ValueError, match="no cases"):
        log_cumulative(cumulative_from_daily([0, 0, 0]))
    with pytest.raises(ValueError, match="negative daily value at row 1"):
        cumulative_from_daily([1, -1])


def test_ecdc_fixture_cumulative(fixtures_dir):
    series = ingest_ecdc(fixtures_dir / "ecdc_30.csv", "Japan")
    # hand tally of the fixture rows, 01/03 to 15/03, with the -3 on 10/03 clamped to 0
    expected = [20, 42, 66, 92, 121, 153, 188, 226, 268, 268, 319, 376, 438, 507, 582]
    assert cumulative_from_daily(series.values).tolist() == expected
    assert log_cumulative(expected) == pytest.approx(np.log(expected), abs=1e-15)
