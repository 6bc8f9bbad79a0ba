"""
基于 RSRP 的自相关矩阵估计
"""
from estimator.loss import loss_and_gradient
from estimator.model import (
    EstimatorModel,
    forward_power,
    load_autocorr,
    load_model,
    nmse,
    reconstruct_autocorrelation,
    save_autocorr,
    save_model,
)
from estimator.training import TrainingHistory, estimate_noise_floor, train, train_with_history

__all__ = [
    "EstimatorModel",
    "forward_power",
    "loss_and_gradient",
    "reconstruct_autocorrelation",
    "nmse",
    "train",
    "train_with_history",
    "TrainingHistory",
    "estimate_noise_floor",
    "save_model",
    "load_model",
    "save_autocorr",
    "load_autocorr",
]
