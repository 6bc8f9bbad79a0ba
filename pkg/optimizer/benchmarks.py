"""
对比方案：CSM、RMS 与穷举搜索
"""
import logging

import numpy as np

from core.exceptions import InsufficientDataError, InvalidArgumentError, ProblemTooLargeError
from core.reflection import ReflectionVector, level_phasors, phase_step
from measurement.dataset import MeasurementDataset
from optimizer.objective import batch_objective, hermitian_part

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_BITS = 20
EXHAUSTIVE_CHUNK = 1 << 15
TIE_TOL = 1e-12


def conditional_means(dataset: MeasurementDataset) -> np.ndarray:
    """
    条件样本均值表

    Returns:
        (N, 2^μ) 数组，[n, ψ-1] 为 θ_{n+1} = ψ 的测量条目 RSRP 均值；无样本处为 NaN
    """
    levels = dataset.phase_levels                     # (L, N)
    rsrp = dataset.rsrp
    n_levels = 2**dataset.phase_bits
    onehot = levels[:, :, None] == np.arange(1, n_levels + 1)[None, None, :]   # (L, N, 2^μ)
    counts = onehot.sum(axis=0)
    sums = np.einsum("l,lnk->nk", rsrp, onehot.astype(float))
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def csm_select(dataset: MeasurementDataset, phase_bits: int) -> ReflectionVector:
    """
    条件样本均值（CSM）选择

    对每个元素 n，取条件均值最大的相位；相等时取较小的相位值。

    Raises:
        InsufficientDataError: 某个 (n, ψ) 没有样本
    """
    if dataset.phase_bits != phase_bits:
        raise InvalidArgumentError(
            f"dataset uses {dataset.phase_bits} phase bits, expected {phase_bits}"
        )
    means = conditional_means(dataset)
    missing = np.argwhere(np.isnan(means))
    if missing.size:
        element, level = (int(x) for x in missing[0])
        raise InsufficientDataError(element + 1, (level + 1) * phase_step(phase_bits))

    # argmax 返回首个最大值，即最小相位
    levels = np.argmax(means, axis=1) + 1
    return ReflectionVector(levels, phase_bits)


def rms_select(dataset: MeasurementDataset) -> ReflectionVector:
    """随机最大采样（RMS）：返回测量 RSRP 最大的条目，相等时取最早的条目"""
    if len(dataset) == 0:
        raise InvalidArgumentError("dataset must not be empty")
    return dataset.entries[int(np.argmax(dataset.rsrp))].reflection


def exhaustive_oracle(autocorr: np.ndarray, phase_bits: int, n_elements: int) -> ReflectionVector:
    """
    穷举全部 2^(μN) 个配置，返回全局最优

    按字典序（元素 1 为最高位，下标 1..2^μ）分块枚举；
    目标在容差内相等时取字典序最小者。

    Raises:
        ProblemTooLargeError: μN > 20
    """
    if phase_bits < 1 or n_elements < 1:
        raise InvalidArgumentError(
            f"phase_bits and n_elements must be >= 1, got {phase_bits}, {n_elements}"
        )
    if phase_bits * n_elements > EXHAUSTIVE_MAX_BITS:
        raise ProblemTooLargeError(
            f"exhaustive search over 2^{phase_bits * n_elements} configurations exceeds "
            f"the 2^{EXHAUSTIVE_MAX_BITS} guard"
        )
    herm = hermitian_part(autocorr)
    if herm.shape != (n_elements + 1, n_elements + 1):
        raise InvalidArgumentError(
            f"matrix shape {herm.shape} does not match n_elements={n_elements}"
        )

    n_levels = 2**phase_bits
    total = n_levels**n_elements
    phasors = level_phasors(phase_bits)
    powers = n_levels ** np.arange(n_elements - 1, -1, -1)
    tol = TIE_TOL * max(float(np.trace(herm).real), 1.0)

    best_value = -np.inf
    best_levels = np.ones(n_elements, dtype=int)
    for start in range(0, total, EXHAUSTIVE_CHUNK):
        index = np.arange(start, min(start + EXHAUSTIVE_CHUNK, total))
        digits = (index[:, None] // powers[None, :]) % n_levels      # (B, N)
        candidates = np.hstack([np.ones((index.size, 1), dtype=complex), phasors[digits]])
        values = batch_objective(herm, candidates)
        chunk_max = float(values.max())
        if chunk_max > best_value + tol:
            first = int(np.flatnonzero(values >= chunk_max - tol)[0])
            best_value = float(values[first])
            best_levels = digits[first] + 1

    logger.debug("穷举搜索: μ=%d, N=%d, 最优=%.6e", phase_bits, n_elements, best_value)
    return ReflectionVector(best_levels, phase_bits)
