"""
逐次精化（离散相位坐标上升）
"""
import logging

import numpy as np

from core.exceptions import InvalidArgumentError
from core.reflection import ReflectionVector, level_phasors
from optimizer.objective import hermitian_part

logger = logging.getLogger(__name__)

SCORE_TOL = 1e-12


def successive_refinement(
    autocorr: np.ndarray,
    initial: ReflectionVector,
    phase_bits: int,
    max_sweeps: int = 20,
) -> ReflectionVector:
    """
    循环坐标上升：依次对 θ_1..θ_N 取使 v^H R̂ v 最大的字母表值

    固定其余元素时 v^H R̂ v = const + 2·Re(conj(x_n)·c_n)，c_n = Σ_{i≠n} R̂_ni v_i。
    仅当新取值严格更优（超过容差）时替换，平局保留原值。
    一整轮无变化或达到 max_sweeps 时停止。

    Args:
        autocorr: R̂，维度 N+1
        initial: 初始可行解
        phase_bits: μ
        max_sweeps: 最大轮数
    """
    if initial.phase_bits != phase_bits:
        raise InvalidArgumentError(
            f"initial reflection uses {initial.phase_bits} phase bits, expected {phase_bits}"
        )
    herm = hermitian_part(autocorr)
    if herm.shape[0] != initial.n_elements + 1:
        raise InvalidArgumentError(
            f"reflection length {initial.n_elements + 1} does not match matrix dimension "
            f"{herm.shape[0]}"
        )

    phasors = level_phasors(phase_bits)
    levels = np.array(initial.levels, dtype=int)
    vec = np.array(initial.extended, dtype=complex)
    product = herm @ vec
    objective = float(np.real(np.vdot(vec, product)))
    start_objective = objective

    sweep = 0
    for sweep in range(1, max_sweeps + 1):
        changed = False
        for n in range(levels.size):
            i = n + 1
            coupling = product[i] - herm[i, i] * vec[i]
            scores = 2.0 * np.real(phasors.conj() * coupling)
            current = levels[n] - 1
            best = int(np.argmax(scores))
            scale = max(abs(objective), 1.0)
            if scores[best] <= scores[current] + SCORE_TOL * scale:
                continue

            new_value = phasors[best]
            product = product + herm[:, i] * (new_value - vec[i])
            vec[i] = new_value
            levels[n] = best + 1
            new_objective = objective + float(scores[best] - scores[current])
            if new_objective < objective:
                logger.warning("逐次精化目标下降: %.6e -> %.6e", objective, new_objective)
            objective = new_objective
            changed = True
        if not changed:
            break

    logger.debug(
        "逐次精化: sweeps=%d, objective %.6e -> %.6e", sweep, start_objective, objective
    )
    return ReflectionVector(levels, phase_bits)
