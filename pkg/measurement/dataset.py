"""
训练数据集：L 组 (反射图样, RSRP) 测量

信道在 L 个图样间保持不变（准静态块衰落）。前 L1 条用于训练，其余用于验证；
图样本身 i.i.d. 随机，按下标切分即为随机划分。
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from channel.realization import ChannelRealization
from config.system_config import SystemConfig
from core.exceptions import InvalidArgumentError
from core.io import atomic_write_text
from core.reflection import ReflectionVector, phase_step, quantize_levels, reflection_matrix
from measurement.rs_pattern import rs_pattern
from measurement.rsrp import simulate_rsrp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasurementEntry:
    """单条测量"""
    reflection: ReflectionVector
    rsrp: float


@dataclass(frozen=True)
class MeasurementDataset:
    """
    RSRP 测量数据集

    Attributes:
        entries: L 条测量，按 l 排序
        noise_power: 噪声功率 σ²（瓦）
        train_count: 训练条数 L1
    """

    entries: Tuple[MeasurementEntry, ...]
    noise_power: float
    train_count: int

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise InvalidArgumentError("dataset must contain at least one entry")
        if any(e.rsrp < 0 for e in entries):
            raise InvalidArgumentError("rsrp values must be non-negative")
        if len(entries) >= 2 and not 1 <= self.train_count < len(entries):
            raise InvalidArgumentError(
                f"train_count must satisfy 1 <= L1 < L, got L1={self.train_count}, L={len(entries)}"
            )
        bits = {e.reflection.phase_bits for e in entries}
        sizes = {e.reflection.n_elements for e in entries}
        if len(bits) != 1 or len(sizes) != 1:
            raise InvalidArgumentError("all reflections must share phase_bits and element count")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def phase_bits(self) -> int:
        return self.entries[0].reflection.phase_bits

    @property
    def n_elements(self) -> int:
        return self.entries[0].reflection.n_elements

    @property
    def rsrp(self) -> np.ndarray:
        return np.array([e.rsrp for e in self.entries], dtype=float)

    @property
    def phase_levels(self) -> np.ndarray:
        """L×N 字母表下标"""
        return np.vstack([e.reflection.levels for e in self.entries])

    @property
    def reflections(self) -> List[ReflectionVector]:
        return [e.reflection for e in self.entries]

    def reflection_matrix(self) -> np.ndarray:
        """L×(N+1) 扩展反射向量"""
        return reflection_matrix(self.reflections)

    def train_entries(self) -> Tuple[MeasurementEntry, ...]:
        return self.entries[: self.train_count]

    def validation_entries(self) -> Tuple[MeasurementEntry, ...]:
        return self.entries[self.train_count :]


def split_count(total: int, split_ratio: float) -> int:
    """L1 = round(ratio·L)，限制在 [1, L-1]"""
    if not 0 < split_ratio < 1:
        raise InvalidArgumentError(f"split_ratio must lie in (0, 1), got {split_ratio}")
    if total < 2:
        return total
    return int(min(max(int(round(split_ratio * total)), 1), total - 1))


def random_reflections(
    n_patterns: int, n_elements: int, phase_bits: int, rng: np.random.Generator
) -> List[ReflectionVector]:
    """L 个相位 i.i.d. 均匀取自 Φ_μ 的反射图样"""
    levels = rng.integers(1, 2**phase_bits + 1, size=(n_patterns, n_elements))
    return [ReflectionVector(row, phase_bits) for row in levels]


def build_dataset(
    realization: ChannelRealization,
    config: SystemConfig,
    n_patterns: int,
    rng: np.random.Generator,
    split_ratio: float = 0.9,
    noise_power: Optional[float] = None,
) -> MeasurementDataset:
    """
    在 L 个随机反射图样下测量 RSRP

    Args:
        realization: 信道实现（L 个图样共享）
        config: 系统配置
        n_patterns: 图样数 L
        rng: 随机数流（先抽图样，再逐条生成噪声）
        split_ratio: 训练集比例
        noise_power: 覆盖 σ²，0 表示无噪声数据集

    Returns:
        MeasurementDataset
    """
    if n_patterns < 2:
        raise InvalidArgumentError(f"n_patterns must be >= 2, got {n_patterns}")

    sigma2 = config.noise_power if noise_power is None else float(noise_power)
    pattern = rs_pattern(config.n_subcarriers, config.n_rs_subcarriers, config.rs_offset)
    reflections = random_reflections(n_patterns, config.n_elements, config.phase_bits, rng)

    entries = tuple(
        MeasurementEntry(
            reflection=v,
            rsrp=simulate_rsrp(
                realization, v, pattern, config.n_rs_symbols, config, rng, noise_power=sigma2
            ),
        )
        for v in reflections
    )
    dataset = MeasurementDataset(
        entries=entries,
        noise_power=sigma2,
        train_count=split_count(n_patterns, split_ratio),
    )
    logger.debug(
        "构建数据集: L=%d, L1=%d, μ=%d, σ²=%.3e",
        n_patterns,
        dataset.train_count,
        config.phase_bits,
        sigma2,
    )
    return dataset


# ============================================================
# CSV 导入导出
# ============================================================

def dataset_to_frame(dataset: MeasurementDataset) -> pd.DataFrame:
    """列：l, theta_1..theta_N（弧度）, rsrp_watts"""
    phases = dataset.phase_levels * phase_step(dataset.phase_bits)
    frame = pd.DataFrame(
        phases, columns=[f"theta_{n}" for n in range(1, dataset.n_elements + 1)]
    )
    frame.insert(0, "l", np.arange(1, len(dataset) + 1))
    frame["rsrp_watts"] = dataset.rsrp
    return frame


def dataset_to_csv(dataset: MeasurementDataset, path: Union[str, Path]) -> Path:
    """按 l 顺序写出 CSV（含表头，原子写入）"""
    text = dataset_to_frame(dataset).to_csv(index=False, float_format="%.17g", lineterminator="\n")
    return atomic_write_text(path, text)


def dataset_from_frame(
    frame: pd.DataFrame,
    noise_power: float,
    phase_bits: int,
    split_ratio: float = 0.9,
) -> MeasurementDataset:
    """由 DataFrame 还原数据集，相位量化回字母表下标。"""
    theta_cols: Sequence[str] = [c for c in frame.columns if str(c).startswith("theta_")]
    if "l" not in frame.columns or "rsrp_watts" not in frame.columns or not theta_cols:
        raise InvalidArgumentError("dataset CSV requires columns l, theta_1..theta_N, rsrp_watts")
    theta_cols = sorted(theta_cols, key=lambda c: int(str(c).split("_", 1)[1]))

    frame = frame.sort_values("l", kind="stable")
    return dataset_from_phases(
        frame[list(theta_cols)].to_numpy(dtype=float),
        frame["rsrp_watts"].to_numpy(dtype=float),
        noise_power,
        phase_bits,
        split_ratio,
    )


def dataset_from_phases(
    phases: Union[np.ndarray, Sequence[Sequence[float]]],
    rsrp: Union[np.ndarray, Sequence[float]],
    noise_power: float,
    phase_bits: int,
    split_ratio: float = 0.9,
) -> MeasurementDataset:
    """由 L×N 相位（弧度）与 L 条 RSRP 构造数据集，相位量化回字母表下标。"""
    phases = np.asarray(phases, dtype=float)
    rsrp = np.asarray(rsrp, dtype=float).reshape(-1)
    if phases.ndim != 2 or phases.shape[0] != rsrp.size:
        raise InvalidArgumentError(
            f"phases must be L x N with L = {rsrp.size} rows, got shape {phases.shape}"
        )
    levels = quantize_levels(phases, phase_bits)
    entries = tuple(
        MeasurementEntry(ReflectionVector(row, phase_bits), float(p))
        for row, p in zip(levels, rsrp)
    )
    return MeasurementDataset(
        entries=entries,
        noise_power=float(noise_power),
        train_count=split_count(len(entries), split_ratio),
    )


def dataset_from_csv(
    path: Union[str, Path],
    noise_power: float,
    phase_bits: int,
    split_ratio: float = 0.9,
) -> MeasurementDataset:
    path = Path(path)
    if not path.exists():
        raise InvalidArgumentError(f"dataset file not found: {path}")
    frame = pd.read_csv(path, float_precision="round_trip")
    return dataset_from_frame(frame, noise_power, phase_bits, split_ratio)
