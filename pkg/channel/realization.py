"""
宽带信道实现生成

生成直连、BS-IRS、IRS-用户三段时域信道，计算级联信道、CIR 矩阵 G
（M×(N+1)，第 0 列为直连链路）和自相关矩阵 R = (P/M)·G^H G。
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from channel.geometry import link_distances, los_phasors
from channel.pathloss import LinkType, link_gain
from config.system_config import SystemConfig
from core.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ChannelRealization:
    """
    单次信道实现（构造后不可变，可跨线程共享）

    Attributes:
        direct: 直连链路抽头 f̄，长度 K1
        bs_irs: BS-IRS 抽头 q_n，(N, K2)
        irs_user: IRS-用户抽头 b_n，(N, K3)
        cascaded: 级联抽头 ḡ_n = q_n * b_n，(N, K2+K3-1)
        cir_matrix: CIR 矩阵 G，(M, N+1)
        autocorr: 自相关矩阵 R，(N+1, N+1)
        tx_power: 发射功率 P（瓦）
    """

    direct: np.ndarray
    bs_irs: np.ndarray
    irs_user: np.ndarray
    cascaded: np.ndarray
    cir_matrix: np.ndarray
    autocorr: np.ndarray
    tx_power: float

    @classmethod
    def from_taps(
        cls,
        direct: np.ndarray,
        bs_irs: np.ndarray,
        irs_user: np.ndarray,
        n_subcarriers: int,
        tx_power: float,
    ) -> "ChannelRealization":
        """由给定的三段时域抽头构造实现"""
        direct = np.atleast_1d(np.asarray(direct, dtype=complex))
        bs_irs = np.atleast_2d(np.asarray(bs_irs, dtype=complex))
        irs_user = np.atleast_2d(np.asarray(irs_user, dtype=complex))
        if bs_irs.shape[0] != irs_user.shape[0]:
            raise InvalidArgumentError(
                f"bs_irs and irs_user must have the same element count, "
                f"got {bs_irs.shape[0]} and {irs_user.shape[0]}"
            )

        cascaded = np.array([cascade_taps(q, b) for q, b in zip(bs_irs, irs_user)])
        cascaded = cascaded.reshape(bs_irs.shape[0], bs_irs.shape[1] + irs_user.shape[1] - 1)
        cir = assemble_cir_matrix(direct, cascaded, n_subcarriers)
        autocorr = autocorrelation(cir, tx_power, n_subcarriers)
        return cls(
            direct=_freeze(direct),
            bs_irs=_freeze(bs_irs),
            irs_user=_freeze(irs_user),
            cascaded=_freeze(cascaded),
            cir_matrix=_freeze(cir),
            autocorr=_freeze(autocorr),
            tx_power=float(tx_power),
        )

    @property
    def n_elements(self) -> int:
        return int(self.cascaded.shape[0])

    @property
    def n_subcarriers(self) -> int:
        return int(self.cir_matrix.shape[0])

    @property
    def cascaded_taps(self) -> int:
        return int(self.cascaded.shape[1])

    @property
    def max_taps(self) -> int:
        """K = max(K1, K_r)"""
        return max(int(self.direct.size), self.cascaded_taps)

    def gain_matrix(self) -> np.ndarray:
        """G 的前 K 行 Ḡ（其余行为零填充）"""
        return self.cir_matrix[: self.max_taps]


def cascade_taps(q: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    BS-IRS 与 IRS-用户抽头的线性卷积

    Returns:
        长度 len(q) + len(b) - 1 的复向量
    """
    q = np.asarray(q, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if q.size == 0 or b.size == 0:
        raise InvalidArgumentError("cascade_taps requires non-empty tap vectors")
    return np.convolve(q, b)


def assemble_cir_matrix(direct: np.ndarray, cascaded: np.ndarray, n_subcarriers: int) -> np.ndarray:
    """
    零填充拼接 CIR 矩阵

    Args:
        direct: 直连抽头 f̄，长度 K1
        cascaded: 级联抽头，(N, K_r)；N 可以为 0
        n_subcarriers: 子载波数 M

    Returns:
        (M, N+1) 复矩阵
    """
    direct = np.asarray(direct, dtype=complex).reshape(-1)
    cascaded = np.asarray(cascaded, dtype=complex)
    if cascaded.ndim == 1:
        cascaded = cascaded.reshape(0, 0) if cascaded.size == 0 else cascaded.reshape(1, -1)
    n_elements = cascaded.shape[0]

    if direct.size > n_subcarriers:
        raise InvalidArgumentError(
            f"direct tap count {direct.size} exceeds n_subcarriers {n_subcarriers}"
        )
    if n_elements and cascaded.shape[1] > n_subcarriers:
        raise InvalidArgumentError(
            f"cascaded tap count {cascaded.shape[1]} exceeds n_subcarriers {n_subcarriers}"
        )

    cir = np.zeros((n_subcarriers, n_elements + 1), dtype=complex)
    cir[: direct.size, 0] = direct
    if n_elements:
        cir[: cascaded.shape[1], 1:] = cascaded.T
    return cir


def autocorrelation(cir: np.ndarray, tx_power: float, n_subcarriers: int) -> np.ndarray:
    """
    R = (P/M)·G^H G

    结果显式对称化，保证数值上严格 Hermitian。
    """
    cir = np.asarray(cir, dtype=complex)
    gram = (tx_power / n_subcarriers) * (cir.conj().T @ cir)
    return 0.5 * (gram + gram.conj().T)


def exponential_pdp(n_taps: int, decay: float) -> np.ndarray:
    """归一化指数功率时延谱 ζ_k = e^{-ε(k-1)} / Σ e^{-ε(k-1)}"""
    if n_taps <= 0:
        return np.zeros(0)
    profile = np.exp(-decay * np.arange(n_taps))
    return profile / profile.sum()


def _complex_gaussian(rng: np.random.Generator, shape: tuple) -> np.ndarray:
    """CN(0, 1) 样本"""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def link_gains(config: SystemConfig) -> dict:
    """三段链路线性增益；关闭路径损耗时全部为 1。"""
    if not config.path_loss_enabled:
        return {link.value: 1.0 for link in LinkType}
    distances = link_distances(config)
    return {link.value: link_gain(link, distances[link.value]) for link in LinkType}


def generate_realization(
    config: SystemConfig, rng: Optional[np.random.Generator] = None
) -> ChannelRealization:
    """
    按配置生成一次信道实现

    直连与 BS-IRS 链路：i.i.d. 瑞利衰落，指数功率时延谱；
    IRS-用户链路：首抽头为确定性 LoS（功率占比 κ/(1+κ)，相位由几何决定），
    其余 K3-1 个抽头为 i.i.d. NLoS 瑞利分量，共享 1/(1+κ) 功率并按指数衰减分配。

    Args:
        config: 系统配置
        rng: 随机数流，缺省使用 config.seed

    Returns:
        ChannelRealization
    """
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    n = config.n_elements
    k1, k2, k3 = config.taps_direct, config.taps_bs_irs, config.taps_irs_user
    gains = link_gains(config)

    # 1. 直连链路
    direct_power = gains["direct"] * exponential_pdp(k1, config.pdp_decay)
    direct = np.sqrt(direct_power) * _complex_gaussian(rng, (k1,))

    # 2. BS-IRS 链路（各单元独立）
    bs_irs_power = gains["bs_irs"] * exponential_pdp(k2, config.pdp_decay)
    bs_irs = np.sqrt(bs_irs_power)[None, :] * _complex_gaussian(rng, (n, k2))

    # 3. IRS-用户链路：LoS + NLoS
    kappa = config.rician_factor
    los_fraction = kappa / (1.0 + kappa) if k3 > 1 else 1.0
    irs_user = np.zeros((n, k3), dtype=complex)
    irs_user[:, 0] = np.sqrt(gains["irs_user"] * los_fraction) * los_phasors(config)
    if k3 > 1:
        nlos_power = (
            gains["irs_user"] / (1.0 + kappa) * exponential_pdp(k3 - 1, config.effective_nlos_decay)
        )
        irs_user[:, 1:] = np.sqrt(nlos_power)[None, :] * _complex_gaussian(rng, (n, k3 - 1))

    realization = ChannelRealization.from_taps(
        direct, bs_irs, irs_user, config.n_subcarriers, config.tx_power
    )
    logger.debug(
        "生成信道实现: N=%d, K=%d, tr(R)=%.3e",
        n,
        realization.max_taps,
        float(np.real(np.trace(realization.autocorr))),
    )
    return realization
