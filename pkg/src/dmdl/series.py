from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class Series:
    """An ordered univariate stream with optional ISO date labels."""

    values: np.ndarray
    labels: Optional[list[str]] = None
    name: str = "series"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.labels is not None:
            if len(self.labels) != len(self.values):
                raise ValueError("labels and values differ in length")
            if any(a >= b for a, b in zip(self.labels, self.labels[1:])):
                raise ValueError("labels must be strictly increasing")

    def __len__(self):
        return len(self.values)
