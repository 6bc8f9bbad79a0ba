"""
估计器训练

以 RSRP 减去噪声功率为目标，小批量随机梯度训练秩 K 因子化模型。
目标先按最大值归一化，训练结束后权重按 √scale 还原到物理量纲。
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config.system_config import TrainingHyper
from core.exceptions import InvalidArgumentError, TrainingDivergedError
from estimator.loss import batch_loss_and_gradient
from estimator.model import EstimatorModel
from estimator.optimizers import make_optimizer
from measurement.dataset import MeasurementDataset

logger = logging.getLogger(__name__)


@dataclass
class TrainingHistory:
    """训练过程记录（损失均为归一化目标下的值）"""

    train_loss: List[float] = field(default_factory=list)
    validation_loss: List[float] = field(default_factory=list)
    best_epoch: int = 0
    stop_reason: str = "max_epochs"
    noise_floor: float = 0.0
    target_scale: float = 1.0

    @property
    def epochs_run(self) -> int:
        return len(self.train_loss)


def estimate_noise_floor(dataset: MeasurementDataset, margin: float = 0.05) -> float:
    """σ² 未知时取最小 RSRP 减去一定余量"""
    return max(float(dataset.rsrp.min()) * (1.0 - margin), 0.0)


def prepare_targets(dataset: MeasurementDataset, noise_power: float) -> np.ndarray:
    """t_l = max(p̄(v_l) − σ², 0)"""
    return np.maximum(dataset.rsrp - noise_power, 0.0)


def _complex_gaussian(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def train_with_history(
    dataset: MeasurementDataset,
    k_rank: int,
    hyper: Optional[TrainingHyper] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[EstimatorModel, TrainingHistory]:
    """
    训练并返回模型与训练记录

    Args:
        dataset: 测量数据集（前 L1 条训练，其余验证）
        k_rank: 子网络数 K
        hyper: 训练超参数
        rng: 初始化与洗牌随机数流

    Raises:
        InvalidArgumentError: k_rank < 1、L < 2 或目标全为零
        TrainingDivergedError: 损失出现非有限值
    """
    hyper = hyper or TrainingHyper()
    rng = rng if rng is not None else np.random.default_rng()
    if k_rank < 1:
        raise InvalidArgumentError(f"k_rank must be >= 1, got {k_rank}")
    if len(dataset) < 2:
        raise InvalidArgumentError(f"dataset must contain at least 2 entries, got {len(dataset)}")

    history = TrainingHistory()
    if dataset.phase_bits == 1:
        logger.debug("μ=1: 探测向量为实数，R 非对角元的虚部不受数据约束")

    # 1. 噪声基底与目标
    if hyper.estimate_noise_floor:
        noise_floor = estimate_noise_floor(dataset, hyper.noise_margin)
        logger.warning("σ² 按最小 RSRP 估计: %.3e W（配置值 %.3e W）", noise_floor, dataset.noise_power)
    else:
        noise_floor = dataset.noise_power
    targets = prepare_targets(dataset, noise_floor)
    scale = float(targets.max())
    if scale <= 0:
        raise InvalidArgumentError("all targets are zero after noise subtraction")
    targets = targets / scale
    history.noise_floor = noise_floor
    history.target_scale = scale

    reflections = dataset.reflection_matrix()
    n_train = dataset.train_count
    train_v, train_t = reflections[:n_train], targets[:n_train]
    val_v, val_t = reflections[n_train:], targets[n_train:]
    has_validation = val_v.shape[0] > 0

    # 2. 初始化：使初始 p̂ 与目标同量级
    dimension = reflections.shape[1]
    init_std = hyper.init_scale * np.sqrt(max(float(train_t.mean()), 1e-12) / (k_rank * dimension))
    weights = init_std * _complex_gaussian(rng, (k_rank, dimension))
    optimizer = make_optimizer(hyper, weights.shape)

    best_weights = weights.copy()
    best_loss = np.inf
    since_best = 0
    batch_size = min(hyper.batch_size, n_train)

    # 3. 小批量迭代
    for epoch in range(1, hyper.epochs + 1):
        order = rng.permutation(n_train)
        batch_losses = []
        for start in range(0, n_train, batch_size):
            idx = order[start : start + batch_size]
            loss, grad = batch_loss_and_gradient(weights, train_v[idx], train_t[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, loss)
            batch_losses.append(loss)
            weights = weights + optimizer.update(grad)

        train_loss = float(np.mean(batch_losses))
        if has_validation:
            val_loss, _ = batch_loss_and_gradient(weights, val_v, val_t)
        else:
            val_loss, _ = batch_loss_and_gradient(weights, train_v, train_t)
        if not (np.isfinite(train_loss) and np.isfinite(val_loss)):
            raise TrainingDivergedError(epoch, val_loss if np.isfinite(train_loss) else train_loss)
        history.train_loss.append(train_loss)
        history.validation_loss.append(val_loss)

        # 严格下降才更新，平局保留更早的轮次
        if val_loss < best_loss:
            best_loss = val_loss
            best_weights = weights.copy()
            history.best_epoch = epoch
            since_best = 0
        else:
            since_best += 1
            if since_best % hyper.plateau_patience == 0:
                optimizer.decay(hyper.plateau_decay)

        if epoch % 100 == 0:
            logger.debug(
                "epoch=%d train=%.3e val=%.3e step=%.2e", epoch, train_loss, val_loss,
                optimizer.step_size,
            )

        if val_loss <= hyper.convergence_tol:
            history.stop_reason = "converged"
            break
        if hyper.validation_mode == "early_stop" and since_best >= hyper.early_stop_patience:
            history.stop_reason = "early_stop"
            break

    # monitor 模式只关闭早停，两种模式都返回验证损失最低的权重
    model = EstimatorModel(best_weights * np.sqrt(scale))
    logger.info(
        "训练完成: K=%d, L1=%d, epochs=%d, best_epoch=%d, best_val=%.3e, stop=%s",
        k_rank,
        n_train,
        history.epochs_run,
        history.best_epoch,
        best_loss,
        history.stop_reason,
        extra={"extra_data": {"k_rank": k_rank, "stop_reason": history.stop_reason}},
    )
    return model, history


def train(
    dataset: MeasurementDataset,
    k_rank: int,
    hyper: Optional[TrainingHyper] = None,
    rng: Optional[np.random.Generator] = None,
) -> EstimatorModel:
    """训练估计器，返回验证损失最低的模型"""
    model, _ = train_with_history(dataset, k_rank, hyper, rng)
    return model
