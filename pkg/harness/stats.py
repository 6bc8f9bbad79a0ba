"""
蒙特卡洛统计
"""
import math
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from core.exceptions import InvalidArgumentError


def mean_and_stderr(values: Sequence[float]) -> Tuple[float, float]:
    """
    样本均值与标准误 s/√n

    单个样本时标准误为 0；空序列返回 (nan, nan)。
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return math.nan, math.nan
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


def db_mean_and_stderr(linear_values: Sequence[float]) -> Tuple[float, float]:
    """
    线性域平均后换算为 dB

    标准误按 delta 方法换算：10/ln10 · se / mean。
    """
    mean, stderr = mean_and_stderr(linear_values)
    if not math.isfinite(mean) or mean <= 0:
        return math.nan, math.nan
    return 10.0 * math.log10(mean), 10.0 / math.log(10.0) * stderr / mean


def paired_sign_test(larger: Sequence[float], smaller: Sequence[float]) -> float:
    """
    单侧配对符号检验

    H1: larger[i] > smaller[i] 的概率大于 1/2。相等的配对不计入。

    Returns:
        p 值
    """
    a = np.asarray(larger, dtype=float)
    b = np.asarray(smaller, dtype=float)
    if a.shape != b.shape:
        raise InvalidArgumentError(
            f"paired samples must have equal length, got {a.shape} and {b.shape}"
        )
    wins = int(np.sum(a > b))
    informative = int(np.sum(a != b))
    if informative == 0:
        return 1.0
    return float(stats.binomtest(wins, informative, 0.5, alternative="greater").pvalue)
