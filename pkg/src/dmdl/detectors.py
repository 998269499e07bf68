"""Sequential D-MDL detectors: fixed windowing, adaptive windowing, hierarchical.

Time indices are 0-based positions in the input stream. A cut reported as an
absolute index ``c`` means the new regime starts at ``x[c]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import growth
from .nml import MIN_SEGMENT, GaussianNmlConfig
from .stats import THRESHOLDS, ThresholdConfig, best_cut_from_profile, gaussian_cut_scores, gaussian_profile

Direction = Literal["up", "down", "none"]

MODES = ("fixed", "adaptive", "hierarchical")
MODELS = ("gaussian_direct", "exponential_residual")


@dataclass(frozen=True)
class DetectorConfig:
    mode: str = "hierarchical"
    h: int = 100
    thresholds: ThresholdConfig = field(default_factory=ThresholdConfig)
    model: str = "gaussian_direct"
    beta: float = 0.0
    max_window: Optional[int] = None
    nml: Optional[GaussianNmlConfig] = None
    # "per_order": 1st/2nd scores at their own argmax cut; "zeroth": at the 0th argmax
    sign_cut: str = "per_order"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.h < 2:
            raise ValueError("h must be at least 2")
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")
        if self.max_window is not None and self.max_window < 2 * MIN_SEGMENT:
            raise ValueError("max_window must be at least 4")
        if self.sign_cut not in ("per_order", "zeroth"):
            raise ValueError(f"unknown sign_cut {self.sign_cut!r}")


@dataclass(frozen=True)
class ScoreRecord:
    t: int
    raw0: Optional[float] = None
    raw1: Optional[float] = None
    raw2: Optional[float] = None
    norm0: Optional[float] = None
    norm1: Optional[float] = None
    norm2: Optional[float] = None
    alarm0: bool = False
    alarm1: bool = False
    alarm2: bool = False
    window_size: int = 0
    direction: Direction = "none"
    cut: Optional[int] = None
    # window length the scores were computed on, before any shrink at this step
    scored_size: int = 0

    def raw(self, order: int) -> Optional[float]:
        return (self.raw0, self.raw1, self.raw2)[order]

    def alarm(self, order: int) -> bool:
        return (self.alarm0, self.alarm1, self.alarm2)[order]


def _cut_scores_fn(model: str):
    return gaussian_cut_scores if model == "gaussian_direct" else growth.residual_cut_scores


def _profile_fn(model: str):
    return gaussian_profile if model == "gaussian_direct" else growth.residual_profile


def _static_config(values, model: str) -> GaussianNmlConfig:
    if model == "gaussian_direct":
        return GaussianNmlConfig.from_data(values)
    return growth.residual_config(values)


def mean_direction(window, cut: int) -> Direction:
    left, right = np.mean(window[:cut]), np.mean(window[cut:])
    if right > left:
        return "up"
    if right < left:
        return "down"
    return "none"


def _direction(model: str, window, cut: int) -> Direction:
    if model == "gaussian_direct":
        return mean_direction(window, cut)
    return growth.growth_direction(window, cut)


def fixed_scores(values, config: DetectorConfig, nml: Optional[GaussianNmlConfig] = None) -> np.ndarray:
    """Center-cut scores of every length-``2h`` window, shape ``(T - 2h + 1, 3)``.

    Row ``k`` scores the window ``x[k : k + 2h]``; columns are orders 0/1/2,
    NaN when the window is too short for an order.
    """
    x = np.asarray(values, dtype=float)
    h = config.h
    if x.size < 2 * h + 2:
        raise ValueError(f"series too short for half-window {h}: need at least {2 * h + 2} points")
    cfg = nml or config.nml or _static_config(x, config.model)
    rows = sliding_window_view(x, 2 * h)
    cuts = [c for c in (h - 1, h, h + 1) if MIN_SEGMENT <= c <= 2 * h - MIN_SEGMENT]
    psi = dict(zip(cuts, _cut_scores_fn(config.model)(rows, cuts, cfg).T))
    out = np.full((rows.shape[0], 3), np.nan)
    out[:, 0] = psi[h]
    if h + 1 in psi:
        out[:, 1] = psi[h + 1] - psi[h]
        if h - 1 in psi:
            out[:, 2] = psi[h + 1] - 2.0 * psi[h] + psi[h - 1]
    return out


def run_fixed(series, config: DetectorConfig, nml: Optional[GaussianNmlConfig] = None) -> list[ScoreRecord]:
    """Slide a ``2h`` window and score the split at its center.

    The record at time ``t`` scores ``x[t-h : t+h]`` split before ``x[t]``; an
    order alarms when its score exceeds ``config.beta``.
    """
    x = np.asarray(getattr(series, "values", series), dtype=float)
    h = config.h
    scores = fixed_scores(x, config, nml)
    records = []
    for k, row in enumerate(scores):
        raws = [None if not np.isfinite(v) else float(v) for v in row]
        alarms = [r is not None and r > config.beta for r in raws]
        direction: Direction = "none"
        if any(alarms):
            direction = _direction(config.model, x[k : k + 2 * h], h)
        records.append(
            ScoreRecord(
                t=k + h,
                raw0=raws[0],
                raw1=raws[1],
                raw2=raws[2],
                alarm0=alarms[0],
                alarm1=alarms[1],
                alarm2=alarms[2],
                window_size=2 * h,
                direction=direction,
                cut=k + h,
                scored_size=2 * h,
            )
        )
    return records


class _RunningMoments:
    """Running ``max|x|`` and standard deviation (Welford)."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.max_abs = 0.0

    def push(self, x: float):
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (x - self.mean)
        self.max_abs = max(self.max_abs, abs(x))

    def config(self) -> GaussianNmlConfig:
        std = math.sqrt(self.m2 / self.n) if self.n else 0.0
        return GaussianNmlConfig.from_moments(self.max_abs, std)


class AdaptiveDetector:
    """Online adaptive-window detector.

    With ``hierarchical=True`` the 0th order drives the window while 1st and
    2nd order scores are evaluated inside the same window and never shrink it.
    Otherwise ``order`` selects the statistic that both alarms and shrinks.
    """

    def __init__(self, config: DetectorConfig, order: int = 0, hierarchical: bool = False):
        if order not in (0, 1, 2):
            raise ValueError("order must be 0, 1 or 2")
        self.config = config
        self.order = 0 if hierarchical else order
        self.hierarchical = hierarchical
        self._profile = _profile_fn(config.model)
        self._buf = np.empty(1024)
        self._stop = 0
        self._start = 0
        self._moments = _RunningMoments()

    @property
    def window(self) -> np.ndarray:
        return self._buf[self._start : self._stop]

    def _append(self, x: float):
        if self._stop == self._buf.size:
            self._buf = np.concatenate((self._buf, np.empty(self._buf.size)))
        self._buf[self._stop] = x
        self._stop += 1

    def _nml_config(self) -> GaussianNmlConfig:
        if self.config.nml is not None:
            return self.config.nml
        if self.config.model == "gaussian_direct":
            return self._moments.config()
        return growth.residual_config(self._buf[: self._stop])

    def update(self, x: float) -> ScoreRecord:
        x = float(x)
        t = self._stop
        self._append(x)
        self._moments.push(x)
        cap = self.config.max_window
        if cap is not None and self._stop - self._start > cap:
            self._start = self._stop - cap
        window = self.window
        w = window.size
        psi0 = self._profile(window, self._nml_config())

        orders = (0, 1, 2) if self.hierarchical else (self.order,)
        cuts: dict[int, Optional[int]] = {}
        raws: list[Optional[float]] = [None, None, None]
        alarms = [False, False, False]
        best0 = best_cut_from_profile(psi0, 0) if 0 in orders else None
        for order in orders:
            if order == 0 or (self.hierarchical and self.config.sign_cut == "zeroth"):
                scores = best0
            else:
                scores = best_cut_from_profile(psi0, order)
            value = None if scores is None else (scores.psi0, scores.psi1, scores.psi2)[order]
            if value is None:
                continue
            raws[order] = value
            cuts[order] = scores.cut
            alarms[order] = w * value > THRESHOLDS[order](w, self.config.thresholds)

        direction: Direction = "none"
        lead = next((o for o in (0, 1, 2) if alarms[o]), None)
        if lead is not None:
            direction = _direction(self.config.model, window, cuts[lead])
        cut = cuts.get(self.order)
        abs_cut = None if cut is None else self._start + cut
        if alarms[self.order]:
            self._start += cut
        return ScoreRecord(
            t=t,
            raw0=raws[0],
            raw1=raws[1],
            raw2=raws[2],
            alarm0=alarms[0],
            alarm1=alarms[1],
            alarm2=alarms[2],
            window_size=self._stop - self._start,
            direction=direction,
            cut=abs_cut,
            scored_size=w,
        )


def run_adaptive(series, config: DetectorConfig, order: int = 0) -> list[ScoreRecord]:
    det = AdaptiveDetector(config, order=order)
    return [det.update(v) for v in np.asarray(getattr(series, "values", series), dtype=float)]


def run_hierarchical(series, config: DetectorConfig) -> list[ScoreRecord]:
    det = AdaptiveDetector(config, hierarchical=True)
    return [det.update(v) for v in np.asarray(getattr(series, "values", series), dtype=float)]


def run(series, config: DetectorConfig, order: int = 0) -> list[ScoreRecord]:
    if config.mode == "fixed":
        return run_fixed(series, config)
    if config.mode == "adaptive":
        return run_adaptive(series, config, order)
    return run_hierarchical(series, config)


def normalize_scores(records: list[ScoreRecord]) -> list[ScoreRecord]:
    """Min-max scale each order's raw scores over the run into ``[0, 1]``."""
    updates: list[dict] = [{} for _ in records]
    for order in (0, 1, 2):
        vals = [r.raw(order) for r in records if r.raw(order) is not None]
        if not vals:
            continue
        lo, hi = min(vals), max(vals)
        for upd, rec in zip(updates, records):
            v = rec.raw(order)
            if v is not None:
                upd[f"norm{order}"] = 0.0 if hi == lo else (v - lo) / (hi - lo)
    return [replace(rec, **upd) for rec, upd in zip(records, updates)]


def score_array(records: list[ScoreRecord], order: int, length: int) -> np.ndarray:
    """Raw scores of ``order`` laid out on the stream's time axis, NaN elsewhere."""
    out = np.full(length, np.nan)
    for rec in records:
        v = rec.raw(order)
        if v is not None:
            out[rec.t] = v
    return out
