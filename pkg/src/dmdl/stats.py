"""Differential MDL change statistics and their alarm thresholds.

A window ``x`` of length ``n`` is split at ``cut``: the left segment holds the
first ``cut`` points and the right segment the remaining ``n - cut``. The 0th
order statistic is the per-point codelength saving of the split,

    psi0(cut) = (L(x) - L(x[:cut]) - L(x[cut:])) / n,

and the 1st/2nd orders are its forward first and central second differences
over ``cut``. Every segment entering a codelength needs at least two points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .nml import MIN_SEGMENT, GaussianNmlConfig, codelength_from_moments, gaussian_mle, log_parametric_complexity, nml_codelength


@dataclass(frozen=True)
class CutScores:
    cut: int
    psi0: float
    psi1: Optional[float]
    psi2: Optional[float]
    n: int


@dataclass(frozen=True)
class ThresholdConfig:
    """Confidence parameters for the 0th, 1st and 2nd order alarms."""

    delta: float = 0.05
    delta1: float = 0.05
    delta2: float = 0.05
    d: int = 2

    def __post_init__(self):
        for name in ("delta", "delta1", "delta2"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {value}")


def _check_cut(n: int, cut: int):
    if n < 2 * MIN_SEGMENT or not MIN_SEGMENT <= cut <= n - MIN_SEGMENT:
        raise ValueError("cut leaves a segment shorter than 2")


def dmdl0(window, cut: int, config: GaussianNmlConfig) -> float:
    x = np.asarray(window, dtype=float)
    n = x.size
    _check_cut(n, cut)
    return (nml_codelength(x, config) - nml_codelength(x[:cut], config) - nml_codelength(x[cut:], config)) / n


def dmdl1(window, cut: int, config: GaussianNmlConfig) -> float:
    return dmdl0(window, cut + 1, config) - dmdl0(window, cut, config)


def dmdl2(window, cut: int, config: GaussianNmlConfig) -> float:
    return dmdl0(window, cut + 1, config) - 2.0 * dmdl0(window, cut, config) + dmdl0(window, cut - 1, config)


def dmdl0_closed_form(window, cut: int, config: GaussianNmlConfig) -> float:
    """Variance-ratio form of ``dmdl0``.

    Uses ``(1/2n) log(s0^(2n) / (s1^(2t) s2^(2(n-t))))`` with ``s`` the ML
    standard deviations, plus the complexity ratio. Matches :func:`dmdl0` when
    no standard deviation is clamped, or when all segments are constant.
    """
    x = np.asarray(window, dtype=float)
    n = x.size
    _check_cut(n, cut)
    s0, s1, s2 = (gaussian_mle(seg, config).sigma_hat for seg in (x, x[:cut], x[cut:]))
    variance_term = (n * math.log(s0**2) - cut * math.log(s1**2) - (n - cut) * math.log(s2**2)) / (2 * n)
    complexity = (
        log_parametric_complexity(n, config)
        - log_parametric_complexity(cut, config)
        - log_parametric_complexity(n - cut, config)
    ) / n
    return variance_term + complexity


def h0(window, cut: int, epsilon: float, config: GaussianNmlConfig) -> float:
    return dmdl0(window, cut, config) - epsilon


def h1(window, cut: int, epsilon: float, config: GaussianNmlConfig) -> float:
    x = np.asarray(window, dtype=float)
    n = x.size
    _check_cut(n, cut)
    _check_cut(n, cut + 1)
    L = lambda seg: nml_codelength(seg, config)  # noqa: E731
    return ((L(x[:cut]) + L(x[cut:])) - (L(x[: cut + 1]) + L(x[cut + 1 :]))) / n - epsilon


def h2(window, cut: int, epsilon: float, config: GaussianNmlConfig) -> float:
    """Single change at ``cut`` against two close changes around it.

    The alternative splits the window into ``x[:cut-1]``, the pair
    ``x[cut-1:cut+1]`` and ``x[cut+1:]``.
    """
    x = np.asarray(window, dtype=float)
    n = x.size
    if not (cut - 1 >= MIN_SEGMENT and n - cut - 1 >= MIN_SEGMENT):
        raise ValueError("cut leaves a segment shorter than 2")
    L = lambda seg: nml_codelength(seg, config)  # noqa: E731
    null = L(x[:cut]) + L(x[cut:])
    alt = L(x[: cut - 1]) + L(x[cut - 1 : cut + 1]) + L(x[cut + 1 :])
    return (null - alt) / n - epsilon


def threshold0(w: int, cfg: ThresholdConfig) -> float:
    return (2.0 + cfg.d / 2.0 + cfg.delta) * math.log(w) + math.log(1.0 / cfg.delta)


def threshold1(w: int, cfg: ThresholdConfig) -> float:
    return cfg.d * math.log(w / 2.0) + math.log(1.0 / cfg.delta1)


def threshold2(w: int, cfg: ThresholdConfig) -> float:
    return 2.0 * (cfg.d * math.log(w / 2.0) + math.log(1.0 / cfg.delta2))


THRESHOLDS = (threshold0, threshold1, threshold2)


def gaussian_cut_scores(rows, cuts, config: GaussianNmlConfig) -> np.ndarray:
    """``psi0`` for every row of ``rows`` (shape ``(R, n)``) at each of ``cuts``.

    Segment variances come from prefix sums of the row-centered data.
    """
    X = np.atleast_2d(np.asarray(rows, dtype=float))
    n = X.shape[1]
    c = np.asarray(cuts, dtype=int)
    y = X - X.mean(axis=1, keepdims=True)
    zeros = np.zeros((X.shape[0], 1))
    s1 = np.concatenate((zeros, np.cumsum(y, axis=1)), axis=1)
    s2 = np.concatenate((zeros, np.cumsum(y * y, axis=1)), axis=1)
    m_right = n - c
    var_left = s2[:, c] / c - (s1[:, c] / c) ** 2
    var_right = (s2[:, [n]] - s2[:, c]) / m_right - ((s1[:, [n]] - s1[:, c]) / m_right) ** 2
    var_whole = s2[:, [n]] / n - (s1[:, [n]] / n) ** 2
    whole = codelength_from_moments(np.array(n), var_whole, config)
    left = codelength_from_moments(c, var_left, config)
    right = codelength_from_moments(m_right, var_right, config)
    return (whole - left - right) / n


def admissible_cuts(n: int) -> np.ndarray:
    return np.arange(MIN_SEGMENT, n - MIN_SEGMENT + 1)


def gaussian_profile(window, config: GaussianNmlConfig) -> np.ndarray:
    """``psi0`` at every cut of ``window`` in one vectorized pass.

    Returns an array of length ``n + 1`` indexed by cut, NaN where the cut is
    not admissible. Same arithmetic as :func:`gaussian_cut_scores`, with
    slices in place of fancy indexing.
    """
    x = np.asarray(window, dtype=float)
    n = x.size
    out = np.full(n + 1, np.nan)
    if n < 2 * MIN_SEGMENT:
        return out
    y = x - x.mean()
    s1 = np.empty(n + 1)
    s2 = np.empty(n + 1)
    s1[0] = s2[0] = 0.0
    np.cumsum(y, out=s1[1:])
    np.cumsum(y * y, out=s2[1:])
    lo, hi = MIN_SEGMENT, n - MIN_SEGMENT + 1
    c = np.arange(lo, hi)
    m_right = n - c
    var_left = s2[lo:hi] / c - (s1[lo:hi] / c) ** 2
    var_right = (s2[n] - s2[lo:hi]) / m_right - ((s1[n] - s1[lo:hi]) / m_right) ** 2
    var_whole = s2[n] / n - (s1[n] / n) ** 2
    whole = codelength_from_moments(np.array(n), var_whole, config)
    out[lo:hi] = (whole - codelength_from_moments(c, var_left, config) - codelength_from_moments(m_right, var_right, config)) / n
    return out


def difference_profiles(psi0: np.ndarray):
    """First and second differences of a cut profile, NaN-padded to its length."""
    psi1 = np.full_like(psi0, np.nan)
    psi2 = np.full_like(psi0, np.nan)
    psi1[:-1] = psi0[1:] - psi0[:-1]
    psi2[1:-1] = psi0[2:] - 2.0 * psi0[1:-1] + psi0[:-2]
    return psi1, psi2


TIE_RTOL = 1e-12


def _opt(value) -> Optional[float]:
    return None if not np.isfinite(value) else float(value)


def best_cut_from_profile(psi0: np.ndarray, order: int) -> Optional[CutScores]:
    psi1, psi2 = difference_profiles(psi0)
    target = (psi0, psi1, psi2)[order]
    if not np.any(np.isfinite(target)):
        return None
    # values within rounding of the maximum count as ties; the smallest cut wins
    top = np.nanmax(target)
    tol = TIE_RTOL * max(1.0, abs(top))
    cut = int(np.flatnonzero(target >= top - tol)[0])
    return CutScores(cut=cut, psi0=float(psi0[cut]), psi1=_opt(psi1[cut]), psi2=_opt(psi2[cut]), n=psi0.size - 1)


def best_cut(window, order: int, config: GaussianNmlConfig, profile: Callable = gaussian_profile) -> CutScores:
    """The cut maximizing the ``order``-th D-MDL over all admissible cuts."""
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    scores = best_cut_from_profile(profile(window, config), order)
    if scores is None:
        raise ValueError(f"window too short for order {order}")
    return scores
