"""Normalized maximum likelihood codelengths for the univariate Gaussian.

The parametric complexity used here is the closed form for a Gaussian whose
mean is bounded by ``mu_max`` and whose standard deviation is bounded below by
``sigma_min``::

    log C_n = 1/2 log(16 mu_max / (pi sigma_min^2)) + n/2 log(n / 2e) - log Gamma((n-1)/2)

All logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

MIN_SEGMENT = 2


@dataclass(frozen=True)
class GaussianNmlConfig:
    """Hyperparameters bounding the Gaussian model class."""

    mu_max: float
    sigma_min: float
    sigma_max: float
    d: int = 2

    def __post_init__(self):
        if not self.mu_max > 0:
            raise ValueError("mu_max must be positive")
        if not 0 < self.sigma_min < self.sigma_max:
            raise ValueError("need 0 < sigma_min < sigma_max")
        if self.d != 2:
            raise ValueError("the univariate Gaussian class has d = 2")

    @classmethod
    def from_data(cls, x) -> "GaussianNmlConfig":
        """Data-driven defaults: scale-robust bounds derived from ``x``."""
        x = np.asarray(x, dtype=float)
        if x.size == 0:
            return cls(mu_max=1.0, sigma_min=0.005, sigma_max=100.0)
        return cls.from_moments(float(np.max(np.abs(x))), float(np.std(x)))

    @classmethod
    def from_moments(cls, max_abs: float, std: float) -> "GaussianNmlConfig":
        scale = max(1.0, std)
        return cls(mu_max=max(1.0, max_abs), sigma_min=0.005 * scale, sigma_max=100.0 * scale)

    @property
    def complexity_offset(self) -> float:
        """The data-size independent part of ``log C_n``."""
        return 0.5 * math.log(16.0 * self.mu_max / (math.pi * self.sigma_min**2))


@dataclass(frozen=True)
class GaussianMle:
    mu_hat: float
    sigma_hat: float
    n: int
    clamped: bool


def gaussian_mle(segment, config: GaussianNmlConfig) -> GaussianMle:
    """Maximum likelihood mean and standard deviation, clamped to the class bounds."""
    x = np.asarray(segment, dtype=float)
    if x.size == 0:
        raise ValueError("empty segment")
    mu = float(np.mean(x))
    sigma = math.sqrt(float(np.mean((x - mu) ** 2)))
    clipped = min(max(sigma, config.sigma_min), config.sigma_max)
    return GaussianMle(mu_hat=mu, sigma_hat=clipped, n=int(x.size), clamped=clipped != sigma)


def log_complexity_tail(n):
    """``n/2 log(n/2e) - log Gamma((n-1)/2)``; vectorized over ``n``."""
    n = np.asarray(n, dtype=float)
    return 0.5 * n * np.log(n / (2.0 * math.e)) - gammaln(0.5 * (n - 1.0))


_TAIL = np.array([np.nan, np.nan])


def tail_table(n_max: int) -> np.ndarray:
    """Cached ``log_complexity_tail(m)`` for ``m = 0..n_max`` (NaN below 2)."""
    global _TAIL
    if _TAIL.size <= n_max:
        size = max(n_max + 1, 2 * _TAIL.size)
        table = np.full(size, np.nan)
        table[2:] = log_complexity_tail(np.arange(2, size))
        _TAIL = table
    return _TAIL


def log_parametric_complexity(n: int, config: GaussianNmlConfig) -> float:
    if n < MIN_SEGMENT:
        raise ValueError("segment too short for NML normalizer")
    return config.complexity_offset + float(log_complexity_tail(n))


def clamped_neg_loglik(m, var, config: GaussianNmlConfig):
    """Negative log-likelihood of ``m`` points with ML variance ``var``.

    The likelihood is evaluated at the clamped standard deviation, so the
    residual term ``m var / (2 s^2)`` only reduces to ``m/2`` when no clamping
    happens. Works elementwise on arrays.
    """
    m = np.asarray(m, dtype=float)
    var = np.maximum(np.asarray(var, dtype=float), 0.0)
    s2 = np.clip(var, config.sigma_min**2, config.sigma_max**2)
    return 0.5 * m * np.log(2.0 * math.pi * s2) + 0.5 * m * var / s2


def codelength_from_moments(m, var, config: GaussianNmlConfig):
    """NML codelength of segments summarized by their length and ML variance."""
    m = np.asarray(m)
    if m.dtype.kind in "iu":
        tail = tail_table(int(m.max()))[m]
    else:
        tail = log_complexity_tail(m)
    return clamped_neg_loglik(m, var, config) + config.complexity_offset + tail


def nml_codelength(segment, config: GaussianNmlConfig) -> float:
    x = np.asarray(segment, dtype=float)
    n = x.size
    if n < MIN_SEGMENT:
        raise ValueError("segment too short for NML normalizer")
    mle = gaussian_mle(x, config)
    s2 = mle.sigma_hat**2
    neg_loglik = 0.5 * n * math.log(2.0 * math.pi * s2) + float(np.sum((x - mle.mu_hat) ** 2)) / (2.0 * s2)
    return neg_loglik + log_parametric_complexity(n, config)
