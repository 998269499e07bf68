"""Synthetic streams with multiple mean or variance changes.

Levels step up at ``spacing * i`` for ``i = 1..num_changes`` with weights
``num_changes + 1 - i``. The abrupt variant uses a Heaviside step (strict:
the new level starts one step after the change time); the gradual variant
ramps linearly over ``ramp`` steps starting at the change time.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .series import Series


@dataclass(frozen=True)
class SynthConfig:
    kind: Literal["mean", "variance"] = "mean"
    transition: Literal["abrupt", "gradual"] = "abrupt"
    length: int = 10000
    seed: int = 0
    amplitude: Optional[float] = None
    spacing: int = 1000
    ramp: int = 300
    num_changes: int = 9

    def __post_init__(self):
        if self.kind not in ("mean", "variance"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.transition not in ("abrupt", "gradual"):
            raise ValueError(f"unknown transition {self.transition!r}")
        if not 0 < self.ramp < self.spacing:
            raise ValueError("ramp must lie in (0, spacing)")

    @property
    def step(self) -> float:
        if self.amplitude is not None:
            return self.amplitude
        return 0.3 if self.kind == "mean" else 0.1


def heaviside(x):
    return (np.asarray(x) > 0).astype(float)


def ramp(x, width: int = 300):
    return np.clip(np.asarray(x, dtype=float) / width, 0.0, 1.0)


def _level(t, cfg: SynthConfig):
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t)
    for i in range(1, cfg.num_changes + 1):
        arg = t - cfg.spacing * i
        shape = heaviside(arg) if cfg.transition == "abrupt" else ramp(arg, cfg.ramp)
        total = total + (cfg.num_changes + 1 - i) * shape
    return cfg.step * total


def mean_at(t, cfg: SynthConfig):
    """Mean level at ``t``; zero for variance streams. Accepts arrays."""
    if cfg.kind != "mean":
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
    level = _level(t, cfg)
    return level if np.ndim(t) else float(level)


def sigma_at(t, cfg: SynthConfig):
    """Standard deviation at ``t``; one for mean streams. Accepts arrays."""
    if cfg.kind != "variance":
        return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0
    level = np.exp(_level(t, cfg))
    return level if np.ndim(t) else float(level)


def change_points(cfg: SynthConfig) -> list[int]:
    return [cfg.spacing * i for i in range(1, cfg.num_changes + 1)]


def generate(cfg: SynthConfig) -> Series:
    rng = np.random.default_rng(cfg.seed)
    t = np.arange(cfg.length)
    mu = mean_at(t, cfg)
    sigma = sigma_at(t, cfg)
    x = mu + sigma * rng.standard_normal(cfg.length)
    name = f"{cfg.transition}-{cfg.kind}-seed{cfg.seed}"
    return Series(
        values=x,
        name=name,
        meta={"true_mu": mu, "true_sigma": sigma, "change_points": change_points(cfg)},
    )
