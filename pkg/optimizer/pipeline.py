"""
反射设计流程

SDR → 高斯随机化 + 量化 → 逐次精化，以及结果评估与序列化。
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from channel.ofdm import VectorLike
from config.system_config import OptimizerHyper
from core.exceptions import InvalidArgumentError
from core.reflection import ReflectionVector
from core.units import linear_to_db
from optimizer.benchmarks import exhaustive_oracle
from optimizer.objective import check_psd, quadratic_objective
from optimizer.randomization import gaussian_randomization
from optimizer.refinement import successive_refinement
from optimizer.sdr import solve_sdr_relaxation

logger = logging.getLogger(__name__)


class Method(str, Enum):
    """方案标签"""

    PROPOSED = "proposed"        # 秩 K 估计 R̂ + 反射设计
    RANK_ONE = "rank_one"        # 秩一估计 R̂ + 反射设计
    CSM = "csm"
    RMS = "rms"
    UPPER_BOUND = "upper_bound"  # 真实 R + 反射设计
    EXHAUSTIVE = "exhaustive"


ESTIMATION_METHODS = (Method.PROPOSED, Method.RANK_ONE)


@dataclass(frozen=True)
class OptimizationResult:
    """
    Attributes:
        reflection: 选定的反射向量
        objective: v^H R v（W），R 为求解所用矩阵
        method: 方案标签
    """

    reflection: ReflectionVector
    objective: float
    method: Method


def optimize_reflection(
    autocorr: np.ndarray,
    phase_bits: int,
    hyper: Optional[OptimizerHyper] = None,
    rng: Optional[np.random.Generator] = None,
    method: Method = Method.PROPOSED,
) -> OptimizationResult:
    """
    求解 max v^H R̂ v，θ_n ∈ Φ_μ

    Args:
        autocorr: R̂（Hermitian 半正定，维度 N+1）
        phase_bits: μ
        hyper: 求解超参数
        rng: 随机数流（SDR 初始化与随机化各派生一个子流）
        method: 结果标签；EXHAUSTIVE 时直接穷举

    Returns:
        OptimizationResult，objective 在 R̂ 上计算
    """
    hyper = hyper or OptimizerHyper()
    rng = rng if rng is not None else np.random.default_rng()
    herm = check_psd(autocorr)
    n_elements = herm.shape[0] - 1
    if n_elements < 1:
        raise InvalidArgumentError("matrix dimension must be at least 2")

    if method == Method.EXHAUSTIVE:
        reflection = exhaustive_oracle(herm, phase_bits, n_elements)
        return OptimizationResult(reflection, quadratic_objective(herm, reflection), method)

    sdr_rng, random_rng = rng.spawn(2)

    # μ=1 时 v 为实向量，v^H R v = v^T Re(R) v，在实部上松弛更紧
    working = herm.real.astype(complex) if phase_bits == 1 else herm

    # 1. 松弛求解
    relaxed = solve_sdr_relaxation(
        working,
        rank_cap=hyper.rank_cap,
        iterations=hyper.sdr_iterations,
        rng=sdr_rng,
        tol=hyper.sdr_tol,
    )
    # 2. 随机化 + 量化
    candidate = gaussian_randomization(relaxed, hyper.randomization_trials, phase_bits, random_rng)
    # 3. 逐次精化
    refined = successive_refinement(working, candidate, phase_bits, hyper.refinement_sweeps)

    objective = quadratic_objective(herm, refined)
    logger.debug(
        "反射设计 %s: sdr=%.6e, randomized=%.6e, refined=%.6e",
        method.value,
        relaxed.objective,
        quadratic_objective(herm, candidate),
        objective,
    )
    return OptimizationResult(refined, objective, method)


def evaluate_snr(autocorr: np.ndarray, v: VectorLike, noise_power: float) -> float:
    """平均接收 SNR v^H R v / σ²（线性值）"""
    if noise_power <= 0:
        raise InvalidArgumentError(f"noise power must be positive, got {noise_power}")
    return quadratic_objective(autocorr, v) / noise_power


def evaluate_snr_db(autocorr: np.ndarray, v: VectorLike, noise_power: float) -> float:
    return linear_to_db(evaluate_snr(autocorr, v, noise_power))


def result_to_dict(result: OptimizationResult, noise_power: float) -> Dict[str, Any]:
    """序列化为 {method, phases, objective_watts, snr_db}"""
    if noise_power <= 0:
        raise InvalidArgumentError(f"noise power must be positive, got {noise_power}")
    return {
        "method": result.method.value,
        "phase_bits": result.reflection.phase_bits,
        "phases": [float(x) for x in result.reflection.phases],
        "objective_watts": float(result.objective),
        "snr_db": float(linear_to_db(result.objective / noise_power)),
    }
