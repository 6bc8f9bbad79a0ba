"""
参考信号（RS）子载波图样与部分 DFT 自相关
"""
from dataclasses import dataclass

import numpy as np

from channel.ofdm import dft_matrix
from core.exceptions import InvalidArgumentError


@dataclass(frozen=True)
class RsPattern:
    """均匀插入的 RS 子载波集合 ℳ0 = {offset + i·(m/m0)}"""

    m: int
    m0: int
    offset: int = 0

    @property
    def spacing(self) -> int:
        return self.m // self.m0

    @property
    def indices(self) -> np.ndarray:
        return self.offset + self.spacing * np.arange(self.m0)

    def partial_dft(self) -> np.ndarray:
        """F̄：F_M 中 ℳ0 对应的行，(m0, m)"""
        return dft_matrix(self.m, self.indices)


def rs_pattern(m: int, m0: int, offset: int = 0) -> RsPattern:
    """
    构造均匀 RS 图样

    Args:
        m: 子载波总数 M
        m0: RS 子载波数 M0，须整除 M
        offset: 首个 RS 下标，须小于 M/M0
    """
    if m < 1 or m0 < 1:
        raise InvalidArgumentError(f"m and m0 must be >= 1, got m={m}, m0={m0}")
    if m0 > m or m % m0 != 0:
        raise InvalidArgumentError(f"m ({m}) must be divisible by m0 ({m0})")
    if not 0 <= offset < m // m0:
        raise InvalidArgumentError(f"offset must lie in [0, {m // m0 - 1}], got {offset}")
    return RsPattern(m=m, m0=m0, offset=offset)


def partial_dft_autocorr(pattern: RsPattern) -> np.ndarray:
    """F̄^H F̄（M×M），直接矩阵乘法计算"""
    partial = pattern.partial_dft()
    return partial.conj().T @ partial


def tiled_identity(m: int, m0: int, offset: int = 0) -> np.ndarray:
    """
    F̄^H F̄ 的闭式结构

    (k, k') 元素在 k ≡ k' (mod M0) 时为 M0·e^{j2π·offset·(k-k')/M}，否则为 0；
    offset = 0 时即 M0 倍的 (M/M0)×(M/M0) 块平铺单位阵。
    """
    pattern = rs_pattern(m, m0, offset)
    k = np.arange(pattern.m)
    diff = k[:, None] - k[None, :]
    mask = (diff % pattern.m0) == 0
    phase = np.exp(2j * np.pi * ((pattern.offset * diff) % pattern.m) / pattern.m)
    return np.where(mask, pattern.m0 * phase, 0.0)
