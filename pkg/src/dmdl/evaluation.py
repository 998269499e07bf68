"""Benefit / false-alarm evaluation, Type I Monte Carlo, and KL helpers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .nml import GaussianNmlConfig, codelength_from_moments, log_parametric_complexity


@dataclass(frozen=True)
class EvalConfig:
    """``T`` is the maximum tolerant delay; ``beta_grid`` None means a quantile grid."""

    T: int = 100
    change_points: Sequence[int] = ()
    beta_grid: Optional[Sequence[float]] = None
    grid_size: int = 200

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("T must be at least 1")
        if self.beta_grid is not None:
            grid = np.asarray(self.beta_grid, dtype=float)
            if grid.size == 0:
                raise ValueError("beta_grid must be nonempty")
            steps = np.diff(grid)
            if grid.size > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
                raise ValueError("beta_grid must be strictly monotone")


@dataclass
class EvalResult:
    points: list[tuple[float, float]]
    auc: float
    betas: list[float] = field(default_factory=list)


def benefit(t: int, t_star: int, T: int) -> float:
    gap = abs(t - t_star)
    return 1.0 - gap / T if gap < T else 0.0


def benefit_profile(length: int, change_points: Sequence[int], T: int) -> np.ndarray:
    """Per-step benefit, each step credited to its nearest change."""
    k = np.arange(length)
    b = np.zeros(length)
    for t_star in change_points:
        b = np.maximum(b, np.clip(1.0 - np.abs(k - t_star) / T, 0.0, None))
    return b


def total_benefit(alarms, eval_cfg: EvalConfig) -> float:
    a = np.asarray(alarms, dtype=bool)
    return float(np.sum(benefit_profile(a.size, eval_cfg.change_points, eval_cfg.T)[a]))


def false_alarms(alarms, eval_cfg: EvalConfig) -> int:
    a = np.asarray(alarms, dtype=bool)
    b = benefit_profile(a.size, eval_cfg.change_points, eval_cfg.T)
    return int(np.count_nonzero(a & (b == 0)))


def default_beta_grid(scores, size: int = 200) -> np.ndarray:
    s = np.asarray(scores, dtype=float)
    s = s[np.isfinite(s)]
    if s.size == 0:
        return np.array([0.0])
    return np.unique(np.quantile(s, np.linspace(0.0, 1.0, size)))[::-1]


def _trapezoid(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


def auc(scores, eval_cfg: EvalConfig) -> EvalResult:
    """Area under normalized benefit against false-alarm rate over a threshold sweep.

    Missing scores (NaN) never raise an alarm. The FAR-sorted curve is
    extended horizontally to FAR 0 and FAR 1 before the trapezoid rule.
    """
    s = np.asarray(scores, dtype=float)
    if eval_cfg.beta_grid is None:
        grid = default_beta_grid(s, eval_cfg.grid_size)
    else:
        grid = np.asarray(eval_cfg.beta_grid, dtype=float)
    b = benefit_profile(s.size, eval_cfg.change_points, eval_cfg.T)
    finite = np.isfinite(s)
    order = np.argsort(s[finite])
    ranked = s[finite][order]
    cum_b = np.concatenate(([0.0], np.cumsum(b[finite][order][::-1])))
    cum_n = np.concatenate(([0], np.cumsum((b[finite][order] == 0)[::-1])))
    # number of scores strictly above each beta
    above = ranked.size - np.searchsorted(ranked, grid, side="right")
    B = cum_b[above]
    N = cum_n[above].astype(float)
    sup_b, sup_n = B.max(), N.max()
    if sup_b == 0:
        points = [(0.0 if sup_n == 0 else n / sup_n, 0.0) for n in N]
        return EvalResult(points=points, auc=0.0, betas=grid.tolist())
    if sup_n == 0:
        points = [(0.0, bb / sup_b) for bb in B]
        return EvalResult(points=points, auc=float(B.max() / sup_b), betas=grid.tolist())
    far, ben = N / sup_n, B / sup_b
    idx = np.lexsort((ben, far))
    far_sorted, ben_sorted = far[idx], ben[idx]
    x = np.concatenate(([0.0], far_sorted, [1.0]))
    y = np.concatenate(([ben_sorted[0]], ben_sorted, [ben_sorted[-1]]))
    points = list(zip(far.tolist(), ben.tolist()))
    return EvalResult(points=points, auc=_trapezoid(x, y), betas=grid.tolist())


def kl_gaussian(mu1: float, s1: float, mu2: float, s2: float) -> float:
    """``KL(N(mu1, s1^2) || N(mu2, s2^2))``."""
    if s1 <= 0 or s2 <= 0:
        raise ValueError("standard deviations must be positive")
    return math.log(s2 / s1) + (s1**2 + (mu1 - mu2) ** 2) / (2.0 * s2**2) - 0.5


def known_parameter_psi0(x, t: int, before: tuple[float, float], after: tuple[float, float]) -> float:
    """Per-point log-likelihood ratio of the post-change part under known parameters."""
    tail = np.asarray(x, dtype=float)[t:]
    (m1, s1), (m2, s2) = before, after
    llr = np.log(s1 / s2) - (tail - m2) ** 2 / (2 * s2**2) + (tail - m1) ** 2 / (2 * s1**2)
    return float(np.sum(llr) / len(x))


def type1_exponent(n: int, epsilon: float, config: GaussianNmlConfig) -> float:
    return epsilon - log_parametric_complexity(n, config) / n


def type1_bound(n: int, epsilon: float, config: GaussianNmlConfig) -> float:
    exponent = type1_exponent(n, epsilon, config)
    if exponent <= 0:
        raise ValueError("vacuous bound")
    return math.exp(-n * exponent)


def epsilon_for_exponent(n: int, exponent: float, config: GaussianNmlConfig) -> float:
    return exponent + log_parametric_complexity(n, config) / n


def batch_psi0(X: np.ndarray, t: int, config: GaussianNmlConfig) -> np.ndarray:
    """``psi0`` at cut ``t`` for every row of ``X``."""
    n = X.shape[1]
    whole = codelength_from_moments(n, X.var(axis=1), config)
    left = codelength_from_moments(t, X[:, :t].var(axis=1), config)
    right = codelength_from_moments(n - t, X[:, t:].var(axis=1), config)
    return (whole - left - right) / n


def montecarlo_type1(n: int, t: int, epsilon: float, trials: int, config: GaussianNmlConfig, seed: int = 0) -> float:
    """Fraction of i.i.d. N(0, 1) sequences on which the 0th order test accepts a change."""
    type1_bound(n, epsilon, config)
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 1000
    for start in range(0, trials, chunk):
        X = rng.standard_normal((min(chunk, trials - start), n))
        hits += int(np.count_nonzero(batch_psi0(X, t, config) - epsilon > 0))
    return hits / trials
