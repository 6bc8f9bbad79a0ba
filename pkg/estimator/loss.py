"""
MSE 损失与梯度

L = (1/B)·Σ_l (t_l − p̂(v_l))²，t_l 为扣除噪声后的功率。
对 w_k 的梯度（∂/∂Re + j·∂/∂Im）为 −(4/B)·Σ_l r_l·v_l·(v_l^H w_k)，r_l = t_l − p̂(v_l)。
"""
from typing import Sequence, Tuple

import numpy as np

from channel.ofdm import VectorLike, as_extended
from core.exceptions import InvalidArgumentError
from estimator.model import EstimatorModel


def batch_loss_and_gradient(
    weights: np.ndarray, reflections: np.ndarray, targets: np.ndarray
) -> Tuple[float, np.ndarray]:
    """
    数组形式的损失与梯度

    Args:
        weights: (K, N+1)
        reflections: (B, N+1)
        targets: (B,)

    Returns:
        (loss, (K, N+1) 梯度)
    """
    n_samples = reflections.shape[0]
    if n_samples == 0:
        raise InvalidArgumentError("batch must not be empty")
    outputs = reflections.conj() @ weights.T               # (B, K): v_l^H w_k
    predicted = np.sum(np.abs(outputs) ** 2, axis=1)
    residual = targets - predicted
    loss = float(np.mean(residual**2))
    grad = -(4.0 / n_samples) * ((residual[:, None] * outputs).T @ reflections)
    return loss, grad


def loss_and_gradient(
    model: EstimatorModel, batch: Sequence[Tuple[VectorLike, float]]
) -> Tuple[float, np.ndarray]:
    """
    批量 MSE 损失及对各子网络权重的梯度

    Args:
        model: 当前模型
        batch: (反射向量, 目标功率) 列表

    Returns:
        (loss, grads)，grads[k] 对应 w_k
    """
    if len(batch) == 0:
        raise InvalidArgumentError("batch must not be empty")
    reflections = np.vstack([as_extended(v) for v, _ in batch])
    if reflections.shape[1] != model.dimension:
        raise InvalidArgumentError(
            f"reflection length {reflections.shape[1]} does not match model dimension "
            f"{model.dimension}"
        )
    targets = np.array([float(t) for _, t in batch])
    return batch_loss_and_gradient(np.asarray(model.weights), reflections, targets)
