"""Differential MDL change statistics for detecting changes and their signs in data streams."""
from .detectors import AdaptiveDetector, DetectorConfig, ScoreRecord, run, run_adaptive, run_fixed, run_hierarchical
from .evaluation import EvalConfig, EvalResult, auc, benefit, kl_gaussian
from .growth import fit_loglinear, residual_dmdl0
from .nml import GaussianNmlConfig, log_parametric_complexity, nml_codelength
from .pipeline import DataError, RunReport, bench, calibrate_deltas, detect, ingest_csv, ingest_ecdc
from .series import Series
from .stats import ThresholdConfig, best_cut, dmdl0, dmdl1, dmdl2, h0, h1, h2, threshold0, threshold1, threshold2
from .synth import SynthConfig, generate

__all__ = [
    "AdaptiveDetector", "DataError", "DetectorConfig", "EvalConfig", "EvalResult", "GaussianNmlConfig",
    "RunReport", "ScoreRecord", "Series", "SynthConfig", "ThresholdConfig", "auc", "bench", "benefit",
    "best_cut", "calibrate_deltas", "detect", "dmdl0", "dmdl1", "dmdl2", "fit_loglinear", "generate",
    "h0", "h1", "h2", "ingest_csv", "ingest_ecdc", "kl_gaussian", "log_parametric_complexity",
    "nml_codelength", "residual_dmdl0", "run", "run_adaptive", "run_fixed", "run_hierarchical",
    "threshold0", "threshold1", "threshold2",
]
