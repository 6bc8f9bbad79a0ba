"""
蒙特卡洛实验编排与报告
"""
from harness.registry import ExperimentManifest, ExperimentRegistry
from harness.report import (
    CellStats,
    ExperimentReport,
    Provenance,
    TrialValue,
    emit_report,
    load_report,
)
from harness.runner import aggregate, run_experiment, run_trial
from harness.spec import ExperimentSpec, load_experiment_spec, parse_experiment_spec
from harness.stats import mean_and_stderr, paired_sign_test

__all__ = [
    "ExperimentSpec",
    "load_experiment_spec",
    "parse_experiment_spec",
    "ExperimentManifest",
    "ExperimentRegistry",
    "CellStats",
    "Provenance",
    "TrialValue",
    "ExperimentReport",
    "emit_report",
    "load_report",
    "run_trial",
    "run_experiment",
    "aggregate",
    "mean_and_stderr",
    "paired_sign_test",
]
