"""
OFDM 频域响应

DFT 采用非归一化约定，F_M[m, k] = e^{-j2πmk/M}。
"""
from typing import Optional, Sequence, Union

import numpy as np

from core.exceptions import InvalidArgumentError
from core.reflection import ReflectionVector

VectorLike = Union[ReflectionVector, np.ndarray, Sequence[complex]]


def dft_matrix(n_subcarriers: int, indices: Optional[Sequence[int]] = None) -> np.ndarray:
    """非归一化 DFT 矩阵（可只取部分行）"""
    rows = np.arange(n_subcarriers) if indices is None else np.asarray(indices, dtype=int)
    cols = np.arange(n_subcarriers)
    # 指数先对 M 取模，大 M 时保持相位精度
    exponent = np.outer(rows, cols) % n_subcarriers
    return np.exp(-2j * np.pi * exponent / n_subcarriers)


def as_extended(v: VectorLike) -> np.ndarray:
    """统一为扩展反射向量（复数组）"""
    if isinstance(v, ReflectionVector):
        return v.extended
    return np.asarray(v, dtype=complex).reshape(-1)


def channel_frequency_response(
    cir: np.ndarray,
    v: VectorLike,
    indices: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """
    h = F_M · G · v，可限制到子载波子集

    Args:
        cir: CIR 矩阵 G，(M, N+1)
        v: 扩展反射向量
        indices: 子载波下标，缺省为全部

    Returns:
        复频响向量
    """
    cir = np.asarray(cir, dtype=complex)
    vec = as_extended(v)
    n_subcarriers = cir.shape[0]
    if vec.size != cir.shape[1]:
        raise InvalidArgumentError(
            f"reflection length {vec.size} does not match CIR columns {cir.shape[1]}"
        )

    # numpy 的 fft 即非归一化 e^{-j2πmk/M}
    response = np.fft.fft(cir @ vec)
    if indices is None:
        return response

    idx = np.asarray(indices, dtype=int).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= n_subcarriers):
        raise InvalidArgumentError(
            f"subcarrier indices must lie in [0, {n_subcarriers - 1}]"
        )
    return response[idx]
