"""
半定松弛（低秩因子化求解）

max Tr(R̂ V)  s.t. V ⪰ 0, V_ii = 1
令 V = Z Z^H（Z 为 (N+1)×p，行单位范数），对 Z 做行归一化的投影梯度上升：
Z ← rownorm((R̂ + cI) Z)。R̂ 半正定时每步目标不减。
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.exceptions import InvalidArgumentError
from optimizer.objective import check_psd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SdrSolution:
    """
    Attributes:
        factor: Z，(N+1)×p，各行单位范数
        objective: Tr(R̂ Z Z^H)
        rank_cap: p
        autocorr: 求解所用的 R̂
        iterations: 实际迭代次数
    """

    factor: np.ndarray
    objective: float
    rank_cap: int
    autocorr: np.ndarray
    iterations: int = 0

    def gram(self) -> np.ndarray:
        """V = Z Z^H"""
        return self.factor @ self.factor.conj().T


def default_rank_cap(dimension: int) -> int:
    """p = ⌈√(2(N+1))⌉"""
    return int(math.ceil(math.sqrt(2 * dimension)))


def normalize_rows(factor: np.ndarray, fallback: Optional[np.ndarray] = None) -> np.ndarray:
    """行归一化；零行沿用 fallback 对应行"""
    norms = np.linalg.norm(factor, axis=1, keepdims=True)
    zero = norms[:, 0] <= np.finfo(float).tiny
    safe = np.where(norms > np.finfo(float).tiny, norms, 1.0)
    result = factor / safe
    if np.any(zero):
        if fallback is None:
            result[zero] = 0.0
            result[zero, 0] = 1.0
        else:
            result[zero] = fallback[zero]
    return result


def relaxation_objective(autocorr: np.ndarray, factor: np.ndarray) -> float:
    """Tr(R Z Z^H) = Re Σ conj(Z) ⊙ (R Z)"""
    return float(np.real(np.sum(factor.conj() * (autocorr @ factor))))


def solve_sdr_relaxation(
    autocorr: np.ndarray,
    rank_cap: Optional[int] = None,
    iterations: int = 500,
    rng: Optional[np.random.Generator] = None,
    tol: float = 1e-10,
) -> SdrSolution:
    """
    求解松弛问题

    Args:
        autocorr: Hermitian 半正定 R̂，维度 N+1
        rank_cap: 因子列数 p，缺省 ⌈√(2(N+1))⌉
        iterations: 最大迭代次数
        rng: 初始化随机数流
        tol: 相对目标提升低于该值时停止

    Returns:
        SdrSolution（最优迭代点）
    """
    herm = check_psd(autocorr)
    if iterations < 1:
        raise InvalidArgumentError(f"iterations must be >= 1, got {iterations}")
    rng = rng if rng is not None else np.random.default_rng()
    dimension = herm.shape[0]
    p = rank_cap or default_rank_cap(dimension)
    if p < 1:
        raise InvalidArgumentError(f"rank_cap must be >= 1, got {p}")

    init = rng.standard_normal((dimension, p)) + 1j * rng.standard_normal((dimension, p))
    factor = normalize_rows(init)
    objective = relaxation_objective(herm, factor)

    lam_max = float(np.linalg.eigvalsh(herm)[-1])
    # 小的对角平移保证 (R + cI)Z 无零行，且不改变单调性
    shifted = herm + (1e-6 * max(lam_max, np.finfo(float).tiny)) * np.eye(dimension)

    used = 0
    for used in range(1, iterations + 1):
        candidate = normalize_rows(shifted @ factor, fallback=factor)
        cand_obj = relaxation_objective(herm, candidate)
        if cand_obj < objective - 1e-12 * max(abs(objective), 1.0):
            # 数值误差导致的下降，拒绝该步
            logger.debug("SDR 第 %d 步目标下降，停止", used)
            break
        gain = cand_obj - objective
        factor, objective = candidate, max(cand_obj, objective)
        if gain <= tol * max(abs(objective), np.finfo(float).tiny):
            break

    logger.debug("SDR 完成: dim=%d, p=%d, iters=%d, obj=%.6e", dimension, p, used, objective)
    return SdrSolution(
        factor=factor,
        objective=max(objective, 0.0),
        rank_cap=p,
        autocorr=herm,
        iterations=used,
    )
