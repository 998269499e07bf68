"""Exponential growth modeling of cumulative counts.

Cumulative counts are modeled as ``C(t) = C(0) exp(r t)``. A window of
log-cumulative values is scored by refitting a least-squares line on the whole
window and on each side of a cut, and comparing the Gaussian NML codelengths
of the residuals. Regression coefficients themselves are not charged any
codelength.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nml import MIN_SEGMENT, GaussianNmlConfig, codelength_from_moments, nml_codelength
from .stats import admissible_cuts


@dataclass(frozen=True)
class LogLinearFit:
    r: float
    log_c0: float
    residuals: np.ndarray
    sse: float


def fit_loglinear(log_values, t0: int = 0) -> LogLinearFit:
    """Ordinary least squares of ``log_values`` on times ``t0, t0 + 1, ...``."""
    y = np.asarray(log_values, dtype=float)
    if y.size < 2:
        raise ValueError("need at least two points for a regression")
    t = np.arange(t0, t0 + y.size, dtype=float)
    tc = t - t.mean()
    r = float(np.dot(tc, y - y.mean()) / np.dot(tc, tc))
    log_c0 = float(y.mean() - r * t.mean())
    residuals = y - (log_c0 + r * t)
    return LogLinearFit(r=r, log_c0=log_c0, residuals=residuals, sse=float(np.dot(residuals, residuals)))


def residual_codelength(log_values, config: GaussianNmlConfig) -> float:
    return nml_codelength(fit_loglinear(log_values).residuals, config)


def _check_cut(n: int, cut: int):
    if n < 2 * MIN_SEGMENT or not MIN_SEGMENT <= cut <= n - MIN_SEGMENT:
        raise ValueError("cut leaves a segment shorter than 2")


def residual_dmdl0(log_values, cut: int, config: GaussianNmlConfig) -> float:
    y = np.asarray(log_values, dtype=float)
    n = y.size
    _check_cut(n, cut)
    L = lambda seg: residual_codelength(seg, config)  # noqa: E731
    return (L(y) - L(y[:cut]) - L(y[cut:])) / n


def residual_dmdl1(log_values, cut: int, config: GaussianNmlConfig) -> float:
    return residual_dmdl0(log_values, cut + 1, config) - residual_dmdl0(log_values, cut, config)


def residual_dmdl2(log_values, cut: int, config: GaussianNmlConfig) -> float:
    return (
        residual_dmdl0(log_values, cut + 1, config)
        - 2.0 * residual_dmdl0(log_values, cut, config)
        + residual_dmdl0(log_values, cut - 1, config)
    )


def _segment_sse(sy, syy, suy, su, suu, m):
    syy_c = syy - sy * sy / m
    suy_c = suy - su * sy / m
    suu_c = suu - su * su / m
    return np.maximum(syy_c - suy_c * suy_c / suu_c, 0.0)


def residual_cut_scores(rows, cuts, config: GaussianNmlConfig) -> np.ndarray:
    """Batched counterpart of :func:`residual_dmdl0` over rows and cuts."""
    Y = np.atleast_2d(np.asarray(rows, dtype=float))
    n = Y.shape[1]
    c = np.asarray(cuts, dtype=int)
    u = np.arange(n, dtype=float) - (n - 1) / 2.0
    y = Y - Y.mean(axis=1, keepdims=True)
    zeros = np.zeros((Y.shape[0], 1))
    Sy = np.concatenate((zeros, np.cumsum(y, axis=1)), axis=1)
    Syy = np.concatenate((zeros, np.cumsum(y * y, axis=1)), axis=1)
    Suy = np.concatenate((zeros, np.cumsum(u * y, axis=1)), axis=1)
    Su = np.concatenate(([0.0], np.cumsum(u)))
    Suu = np.concatenate(([0.0], np.cumsum(u * u)))

    def seg(a, b):
        m = b - a
        sse = _segment_sse(Sy[:, b] - Sy[:, a], Syy[:, b] - Syy[:, a], Suy[:, b] - Suy[:, a], Su[b] - Su[a], Suu[b] - Suu[a], m)
        return codelength_from_moments(m, sse / m, config)

    end = np.full_like(c, n)
    whole = seg(np.array([0]), np.array([n]))
    return (whole - seg(np.zeros_like(c), c) - seg(c, end)) / n


def residual_profile(window, config: GaussianNmlConfig) -> np.ndarray:
    y = np.asarray(window, dtype=float)
    n = y.size
    out = np.full(n + 1, np.nan)
    if n >= 2 * MIN_SEGMENT:
        cuts = admissible_cuts(n)
        out[cuts] = residual_cut_scores(y, cuts, config)[0]
    return out


def residual_config(log_values) -> GaussianNmlConfig:
    """Data-driven hyperparameters computed from the residuals of one global fit."""
    y = np.asarray(log_values, dtype=float)
    if y.size < 2:
        return GaussianNmlConfig.from_data([])
    return GaussianNmlConfig.from_data(fit_loglinear(y).residuals)


def growth_direction(log_values, cut: int) -> str:
    """``up`` when the growth rate after ``cut`` exceeds the rate before it."""
    y = np.asarray(log_values, dtype=float)
    r_left = fit_loglinear(y[:cut]).r
    r_right = fit_loglinear(y[cut:], t0=cut).r
    if r_right > r_left:
        return "up"
    if r_right < r_left:
        return "down"
    return "none"


def cumulative_from_daily(daily) -> np.ndarray:
    d = np.asarray(daily, dtype=float)
    bad = np.flatnonzero(d < 0)
    if bad.size:
        raise ValueError(f"negative daily value at row {int(bad[0])}")
    return np.cumsum(d)


def first_positive(cumulative) -> int:
    c = np.asarray(cumulative, dtype=float)
    positive = np.flatnonzero(c > 0)
    if positive.size == 0:
        raise ValueError("no cases")
    return int(positive[0])


def log_cumulative(cumulative) -> np.ndarray:
    """Log of cumulative counts, starting at the first positive entry."""
    c = np.asarray(cumulative, dtype=float)
    return np.log(c[first_positive(c) :])
