"""
高斯随机化 + 相位量化
"""
import logging
from typing import Optional

import numpy as np

from core.exceptions import InvalidArgumentError
from core.reflection import ReflectionVector, level_phasors, quantize_levels
from optimizer.objective import batch_objective
from optimizer.sdr import SdrSolution

logger = logging.getLogger(__name__)


def gaussian_randomization(
    sdr: SdrSolution,
    trials: int,
    phase_bits: int,
    rng: Optional[np.random.Generator] = None,
) -> ReflectionVector:
    """
    从松弛解生成候选并量化，返回目标最大者

    每次试验 ξ = Z g（g 为标准复高斯），以 ξ[0] 为相位参考去旋转后，
    将 ξ[1:] 的相位量化到 Φ_μ。目标相同时取最早的试验。

    Args:
        sdr: 松弛解
        trials: 试验次数
        phase_bits: μ
        rng: 随机数流
    """
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    rng = rng if rng is not None else np.random.default_rng()
    factor = sdr.factor
    p = factor.shape[1]

    gauss = (rng.standard_normal((p, trials)) + 1j * rng.standard_normal((p, trials))) / np.sqrt(2.0)
    samples = (factor @ gauss).T                          # (trials, N+1)
    reference = np.angle(samples[:, :1])
    phases = np.angle(samples[:, 1:]) - reference
    levels = quantize_levels(phases, phase_bits)           # (trials, N)

    phasors = level_phasors(phase_bits)
    candidates = np.hstack([np.ones((trials, 1), dtype=complex), phasors[levels - 1]])
    objectives = batch_objective(sdr.autocorr, candidates)
    best = int(np.argmax(objectives))
    logger.debug(
        "高斯随机化: trials=%d, best=%.6e, sdr=%.6e", trials, objectives[best], sdr.objective
    )
    return ReflectionVector(levels[best], phase_bits)
