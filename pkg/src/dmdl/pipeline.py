"""Ingestion, delta calibration, run orchestration and report serialization."""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from datetime import date, datetime
from pathlib import Path
from typing import Optional

import numpy as np

from . import growth
from .detectors import DetectorConfig, ScoreRecord, fixed_scores, normalize_scores, run_hierarchical
from .detectors import run as run_detector
from .evaluation import EvalConfig, auc
from .series import Series
from .synth import SynthConfig, change_points, generate

log = logging.getLogger(__name__)

CONFIDENCE_CAP = 0.99
# calibrated deltas are nudged up by this relative amount so the warning-step
# score lands on the inclusive side of the strict alarm comparison
CALIBRATION_MARGIN = 1e-10


class DataError(ValueError):
    """Input data that cannot be turned into a series."""


def _fmt(x: float) -> str:
    return format(x, ".17g")


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def ingest_csv(path, value_column: str, date_column: Optional[str] = None) -> Series:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (value_column, date_column):
            if col is not None and col not in header:
                raise DataError(f"{path}: missing column {col!r} (have {', '.join(header)})")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            try:
                value = float(row[value_column])
            except (TypeError, ValueError):
                raise DataError(f"{path}:{lineno}: cannot parse {value_column}={row[value_column]!r}") from None
            label = None
            if date_column is not None:
                try:
                    label = date.fromisoformat(row[date_column].strip()).isoformat()
                except (AttributeError, ValueError):
                    raise DataError(f"{path}:{lineno}: bad date {row[date_column]!r}") from None
            rows.append((label, value, lineno))
    if date_column is None:
        return Series(values=[v for _, v, _ in rows], name=path.stem)
    rows.sort(key=lambda r: r[0])
    for (a, _, la), (b, _, lb) in zip(rows, rows[1:]):
        if a == b:
            raise DataError(f"{path}:{lb}: duplicate date {b} (also on line {la})")
    return Series(values=[v for _, v, _ in rows], labels=[d for d, _, _ in rows], name=path.stem)


def write_series_csv(series: Series, path, value_column: str = "value"):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if series.labels is not None:
            w.writerow(["date", value_column])
            w.writerows([d, _fmt(v)] for d, v in zip(series.labels, series.values))
        else:
            w.writerow(["t", value_column])
            w.writerows([i, _fmt(v)] for i, v in enumerate(series.values))


def ingest_ecdc(path, country: str) -> Series:
    """Daily cases of one country from the ECDC geographic-distribution CSV."""
    path = Path(path)
    by_date: dict[str, float] = {}
    countries = set()
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        for col in ("dateRep", "cases", "countriesAndTerritories"):
            if col not in (reader.fieldnames or []):
                raise DataError(f"{path}: missing ECDC column {col!r}")
        for lineno, row in enumerate(reader, start=2):
            name = row["countriesAndTerritories"]
            countries.add(name)
            if name != country:
                continue
            try:
                day = datetime.strptime(row["dateRep"].strip(), "%d/%m/%Y").date().isoformat()
                cases = float(row["cases"])
            except ValueError:
                raise DataError(f"{path}:{lineno}: cannot parse row {row['dateRep']!r}, {row['cases']!r}") from None
            if day in by_date:
                raise DataError(f"{path}:{lineno}: duplicate date {day} for {country}")
            by_date[day] = cases
    if not by_date:
        raise DataError(f"unknown country {country!r}; available: {', '.join(sorted(countries))}")
    days = sorted(by_date)
    values = np.array([by_date[d] for d in days])
    negative = 0
    for day, value in zip(days, values):
        if value < 0:
            negative += 1
            log.warning("%s %s: negative daily cases %g clamped to 0", country, day, value)
    return Series(values=np.maximum(values, 0.0), labels=days, name=country, meta={"negative_clamped": negative})


@dataclass
class ModelInput:
    """Detector input derived from a series, with its offset into the original index."""

    values: np.ndarray
    offset: int = 0


def model_input(series: Series, model: str) -> ModelInput:
    if model == "gaussian_direct":
        return ModelInput(values=series.values)
    cumulative = growth.cumulative_from_daily(series.values)
    offset = growth.first_positive(cumulative)
    return ModelInput(values=growth.log_cumulative(cumulative), offset=offset)


def _shift(records: list[ScoreRecord], offset: int) -> list[ScoreRecord]:
    if offset == 0:
        return records
    return [replace(r, t=r.t + offset, cut=None if r.cut is None else r.cut + offset) for r in records]


def calibrate_deltas(series: Series, warning_index: int, detector_cfg: DetectorConfig) -> tuple[float, float]:
    """Confidence parameters that put the 1st/2nd order thresholds at the warning-step scores.

    ``warning_index`` indexes the original series. Each delta is capped at 0.99.
    """
    data = model_input(series, detector_cfg.model)
    k = warning_index - data.offset
    if not 0 <= k < data.values.size:
        raise DataError("warning index outside the modeled range")
    cfg = replace(detector_cfg, mode="hierarchical")
    rec = run_hierarchical(data.values[: k + 1], cfg)[-1]
    if rec.raw1 is None or rec.raw2 is None:
        raise DataError("window too small at warning date")
    w, d = rec.scored_size, cfg.thresholds.d
    out = []
    for score, scale in ((rec.raw1, 1.0), (rec.raw2, 2.0)):
        log_delta = d * math.log(w / 2.0) - w * score / scale
        delta = math.exp(min(log_delta, 0.0)) * (1.0 + CALIBRATION_MARGIN)
        out.append(min(delta, CONFIDENCE_CAP))
    return out[0], out[1]


@dataclass
class RunReport:
    records: list[ScoreRecord]
    alarms: list[tuple[int, int, str, int]]
    config_echo: dict
    provenance: dict = field(default_factory=dict)
    warnings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config_echo,
            "provenance": self.provenance,
            "warnings": self.warnings,
            "alarms": [{"t": t, "order": o, "direction": d, "window_size": w} for t, o, d, w in self.alarms],
            "records": [asdict(r) for r in self.records],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(
            records=[ScoreRecord(**r) for r in data["records"]],
            alarms=[(a["t"], a["order"], a["direction"], a["window_size"]) for a in data["alarms"]],
            config_echo=data["config"],
            provenance=data.get("provenance", {}),
            warnings=data.get("warnings", {}),
        )


def alarm_list(records: list[ScoreRecord]) -> list[tuple[int, int, str, int]]:
    return [(r.t, o, r.direction, r.window_size) for r in records for o in (0, 1, 2) if r.alarm(o)]


def config_echo(cfg: DetectorConfig, order: int = 0) -> dict:
    echo = asdict(cfg)
    echo["order"] = order
    return echo


def detect(series: Series, cfg: DetectorConfig, order: int = 0, provenance: Optional[dict] = None) -> RunReport:
    data = model_input(series, cfg.model)
    records = normalize_scores(_shift(run_detector(data.values, cfg, order), data.offset))
    warnings = {}
    if series.meta.get("negative_clamped"):
        warnings["negative_clamped"] = series.meta["negative_clamped"]
    return RunReport(
        records=records,
        alarms=alarm_list(records),
        config_echo=config_echo(cfg, order),
        provenance=provenance or {},
        warnings=warnings,
    )


TRACE_COLUMNS = [
    "t", "x", "raw0", "raw1", "raw2", "norm0", "norm1", "norm2",
    "alarm0", "alarm1", "alarm2", "window_size", "direction",
]


def write_trace_csv(series: Series, records: list[ScoreRecord], path):
    opt = lambda v: "" if v is None else _fmt(v)  # noqa: E731
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        for r in records:
            w.writerow([
                r.t, _fmt(series.values[r.t]),
                opt(r.raw0), opt(r.raw1), opt(r.raw2),
                opt(r.norm0), opt(r.norm1), opt(r.norm2),
                int(r.alarm0), int(r.alarm1), int(r.alarm2),
                r.window_size, r.direction,
            ])


def write_svg(records: list[ScoreRecord], path, width: int = 800, height: int = 300):
    """Normalized score lines for each order with alarm ticks along the bottom."""
    if not records:
        Path(path).write_text(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"/>\n')
        return
    t0, t1 = records[0].t, max(records[-1].t, records[0].t + 1)
    px = lambda t: (t - t0) / (t1 - t0) * (width - 20) + 10  # noqa: E731
    py = lambda v: height - 30 - v * (height - 50)  # noqa: E731
    colors = ("#1f77b4", "#ff7f0e", "#2ca02c")
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    for order, color in enumerate(colors):
        pts = [f"{px(r.t):.1f},{py(r.norm0 if order == 0 else r.norm1 if order == 1 else r.norm2):.1f}"
               for r in records if (r.norm0, r.norm1, r.norm2)[order] is not None]
        if pts:
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{" ".join(pts)}"/>')
        for r in records:
            if r.alarm(order):
                y = height - 22 + 6 * order
                parts.append(f'<line x1="{px(r.t):.1f}" y1="{y}" x2="{px(r.t):.1f}" y2="{y + 5}" stroke="{color}"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def aligned_fixed_scores(values, h: int) -> np.ndarray:
    """Fixed-window scores on the stream's time axis, shape ``(T, 3)``, NaN at the edges."""
    scores = fixed_scores(values, DetectorConfig(mode="fixed", h=h))
    out = np.full((len(values), 3), np.nan)
    out[h : h + scores.shape[0]] = scores
    return out


def bench_one(kind: str, transition: str, seed: int, T: int = 100, h: int = 100, length: int = 10000,
              grid_size: int = 200) -> list[float]:
    """AUC per order of the fixed-window detector on one synthetic stream."""
    cfg = SynthConfig(kind=kind, transition=transition, seed=seed, length=length)
    scores = aligned_fixed_scores(generate(cfg).values, h)
    ev = EvalConfig(T=T, change_points=change_points(cfg), grid_size=grid_size)
    return [auc(scores[:, order], ev).auc for order in range(3)]


def _bench_task(args):
    return bench_one(*args)


def bench(seeds: list[int], kind: str, transition: str, T: int = 100, h: int = 100, length: int = 10000,
          grid_size: int = 200, workers: int = 1) -> dict:
    tasks = [(kind, transition, s, T, h, length, grid_size) for s in sorted(seeds)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_seed = list(pool.map(_bench_task, tasks))
    else:
        per_seed = [_bench_task(t) for t in tasks]
    table = np.array(per_seed)
    return {
        "kind": kind,
        "transition": transition,
        "T": T,
        "h": h,
        "length": length,
        "seeds": sorted(seeds),
        "per_seed": {str(s): row for s, row in zip(sorted(seeds), per_seed)},
        "auc": {
            str(order): {"mean": float(table[:, order].mean()), "std": float(table[:, order].std())}
            for order in range(3)
        },
    }


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
