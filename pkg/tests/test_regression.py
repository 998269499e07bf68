"""Frozen outputs from inspected runs; regenerate with fixtures/freeze_regressions.py."""
import json

import pytest

from conftest import FIXTURES, step_stream
from dmdl.detectors import DetectorConfig, run_adaptive, run_fixed, run_hierarchical
from dmdl.pipeline import detect, ingest_ecdc


def alarms(records):
    return [[r.t, o, r.direction, r.window_size, r.cut] for r in records for o in range(3) if r.alarm(o)]


@pytest.fixture(scope="module")
def step_expected():
    return json.loads((FIXTURES / "step_expected.json").read_text())


def test_step_series_hierarchical(step_expected):
    recs = run_hierarchical(step_stream(seed=step_expected["seed"]), DetectorConfig())
    assert alarms(recs) == step_expected["hierarchical_alarms"]
    for t, raws in step_expected["hierarchical_raw_at"].items():
        got = [recs[int(t)].raw(o) for o in range(3)]
        assert got == pytest.approx(raws, abs=1e-12, nan_ok=True)


def test_step_series_adaptive(step_expected):
    recs = run_adaptive(step_stream(seed=step_expected["seed"]), DetectorConfig(mode="adaptive"))
    assert alarms(recs) == step_expected["adaptive_alarms"]


def test_step_series_fixed_peak(step_expected):
    recs = run_fixed(step_stream(seed=step_expected["seed"]), DetectorConfig(mode="fixed", h=100))
    assert max(recs, key=lambda r: r.raw0).t == step_expected["fixed_raw0_peak_t"]


def test_ecdc_60_day_timeline(fixtures_dir):
    expected = json.loads((fixtures_dir / "ecdc_60_expected.json").read_text())
    series = ingest_ecdc(fixtures_dir / "ecdc_60_single.csv", "Testland")
    report = detect(series, DetectorConfig(model="exponential_residual"))
    assert [[series.labels[t], o, d, w] for t, o, d, w in report.alarms] == expected["alarms"]
    start = report.records[0].t
    for label, raws in expected["raw_at"].items():
        rec = report.records[series.labels.index(label) - start]
        assert [rec.raw(o) for o in range(3)] == pytest.approx(raws, abs=1e-12)
