"""
RS 插入与 RSRP 测量
"""
from measurement.dataset import (
    MeasurementDataset,
    MeasurementEntry,
    build_dataset,
    dataset_from_csv,
    dataset_from_phases,
    dataset_to_csv,
)
from measurement.rs_pattern import RsPattern, partial_dft_autocorr, rs_pattern, tiled_identity
from measurement.rsrp import expected_power, simulate_rsrp

__all__ = [
    "RsPattern",
    "rs_pattern",
    "partial_dft_autocorr",
    "tiled_identity",
    "expected_power",
    "simulate_rsrp",
    "MeasurementEntry",
    "MeasurementDataset",
    "build_dataset",
    "dataset_to_csv",
    "dataset_from_csv",
    "dataset_from_phases",
]
