"""
RSRP 测量模型

用户在 Q 个 OFDM 符号、M0 个 RS 子载波上平均接收功率。RS 为恒模符号，
幅度 √(P/M)；噪声逐符号、逐子载波独立生成。
"""
from typing import Optional

import numpy as np

from channel.ofdm import VectorLike, as_extended, channel_frequency_response
from channel.realization import ChannelRealization
from config.system_config import SystemConfig
from core.exceptions import InvalidArgumentError
from measurement.rs_pattern import RsPattern


def expected_power(autocorr: np.ndarray, v: VectorLike, noise_power: float) -> float:
    """
    平均接收功率 v^H R v + σ²

    Args:
        autocorr: Hermitian 自相关矩阵 R
        v: 扩展反射向量
        noise_power: σ²（瓦）

    Returns:
        实数功率（瓦），虚部残差被丢弃
    """
    autocorr = np.asarray(autocorr, dtype=complex)
    vec = as_extended(v)
    if autocorr.ndim != 2 or autocorr.shape[0] != autocorr.shape[1]:
        raise InvalidArgumentError(f"autocorr must be square, got shape {autocorr.shape}")
    if vec.size != autocorr.shape[0]:
        raise InvalidArgumentError(
            f"reflection length {vec.size} does not match autocorr dimension {autocorr.shape[0]}"
        )
    return float(np.real(np.vdot(vec, autocorr @ vec))) + float(noise_power)


def simulate_rsrp(
    realization: ChannelRealization,
    v: VectorLike,
    pattern: RsPattern,
    q_symbols: int,
    config: SystemConfig,
    rng: np.random.Generator,
    noise_power: Optional[float] = None,
) -> float:
    """
    一次 RSRP 测量

    (1/(Q·M0))·Σ_q Σ_{m∈ℳ0} |x_m h_m + z_m(q)|²

    Args:
        realization: 信道实现
        v: 扩展反射向量
        pattern: RS 图样
        q_symbols: RS 符号数 Q
        config: 系统配置（P、σ²）
        rng: 噪声随机数流
        noise_power: 覆盖 config 中的 σ²（0 表示无噪声测量）

    Returns:
        RSRP（瓦）
    """
    if pattern.m != config.n_subcarriers:
        raise InvalidArgumentError(
            f"pattern.m ({pattern.m}) must equal n_subcarriers ({config.n_subcarriers})"
        )
    if q_symbols < 1:
        raise InvalidArgumentError(f"q_symbols must be >= 1, got {q_symbols}")

    sigma2 = config.noise_power if noise_power is None else float(noise_power)
    amplitude = np.sqrt(config.tx_power / config.n_subcarriers)
    received = amplitude * channel_frequency_response(realization.cir_matrix, v, pattern.indices)

    if sigma2 <= 0:
        # 无噪声时各符号完全相同
        return float(np.mean(np.abs(received) ** 2))

    shape = (q_symbols, pattern.m0)
    noise = np.sqrt(sigma2 / 2.0) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return float(np.mean(np.abs(received[None, :] + noise) ** 2))
