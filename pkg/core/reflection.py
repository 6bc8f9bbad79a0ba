"""
IRS 反射向量与离散相位字母表

字母表 Φ_μ = {ω, 2ω, …, 2^μ ω}，ω = 2π / 2^μ。反射向量以字母表下标
(1..2^μ) 存储，相位与扩展向量 v = [1, e^{jθ_1}, …, e^{jθ_N}] 由下标派生，
避免浮点相位比较。
"""
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from core.exceptions import InvalidArgumentError

PhaseInput = Union[float, np.ndarray]


def phase_step(phase_bits: int) -> float:
    """相位分辨率 ω = 2π / 2^μ"""
    if phase_bits < 1:
        raise InvalidArgumentError(f"phase_bits must be >= 1, got {phase_bits}")
    return 2.0 * np.pi / (2**phase_bits)


def phase_alphabet(phase_bits: int) -> np.ndarray:
    """按升序返回 Φ_μ 全部取值（弧度）。"""
    levels = np.arange(1, 2**phase_bits + 1)
    return levels * phase_step(phase_bits)


def level_phasors(phase_bits: int) -> np.ndarray:
    """
    各字母表下标对应的单位复数，下标 0 对应 level 1

    轴上的点（±1, ±j）取精确值，保证 |v_n| == 1。
    """
    phasors = np.exp(1j * phase_alphabet(phase_bits))
    real = np.where(np.abs(phasors.real) < 1e-12, 0.0, phasors.real)
    imag = np.where(np.abs(phasors.imag) < 1e-12, 0.0, phasors.imag)
    return real + 1j * imag


def quantize_levels(phase: PhaseInput, phase_bits: int) -> np.ndarray:
    """
    将任意相位量化到最近的字母表下标（圆周距离）

    距离相等时取取值较小的网格点，2π 视为最大取值。

    Returns:
        与输入同形状的整数数组，取值 1..2^μ
    """
    omega = phase_step(phase_bits)
    n_levels = 2**phase_bits
    wrapped = np.mod(np.asarray(phase, dtype=float), 2.0 * np.pi)

    lower = np.floor(wrapped / omega)
    upper = lower + 1.0
    dist_lower = wrapped - lower * omega
    dist_upper = upper * omega - wrapped

    # 网格点 k·ω 的下标：k ≡ 0 映射到 2^μ
    level_lower = (lower.astype(int) - 1) % n_levels + 1
    level_upper = (upper.astype(int) - 1) % n_levels + 1

    tol = 1e-12
    choose_lower = (dist_lower < dist_upper - tol) | (
        (np.abs(dist_lower - dist_upper) <= tol) & (level_lower < level_upper)
    )
    return np.where(choose_lower, level_lower, level_upper).astype(int)


def quantize_to_alphabet(phase: PhaseInput, phase_bits: int) -> PhaseInput:
    """返回 Φ_μ 中距离 phase 最近的取值（弧度）。"""
    levels = quantize_levels(phase, phase_bits)
    values = levels * phase_step(phase_bits)
    if np.ndim(values) == 0:
        return float(values)
    return values


@dataclass(frozen=True)
class ReflectionVector:
    """
    扩展 IRS 反射向量

    Attributes:
        levels: N 个字母表下标 (1..2^μ)
        phase_bits: 相位控制比特数 μ
    """

    levels: np.ndarray
    phase_bits: int
    extended: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        levels = np.asarray(self.levels, dtype=int).reshape(-1)
        n_levels = 2**self.phase_bits
        if self.phase_bits < 1:
            raise InvalidArgumentError(f"phase_bits must be >= 1, got {self.phase_bits}")
        if levels.size and (levels.min() < 1 or levels.max() > n_levels):
            raise InvalidArgumentError(
                f"levels must lie in 1..{n_levels}, got range "
                f"[{levels.min()}, {levels.max()}]"
            )
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)

        phasors = level_phasors(self.phase_bits)
        extended = np.concatenate(([1.0 + 0.0j], phasors[levels - 1]))
        extended.setflags(write=False)
        object.__setattr__(self, "extended", extended)

    @classmethod
    def from_phases(cls, phases: Sequence[float], phase_bits: int) -> "ReflectionVector":
        """由相位（弧度）构造，相位先量化到字母表。"""
        return cls(quantize_levels(np.asarray(phases, dtype=float), phase_bits), phase_bits)

    @classmethod
    def uniform(cls, n_elements: int, phase_bits: int, level: int = 0) -> "ReflectionVector":
        """所有元素取同一相位；level=0 表示 2π（即零相位）。"""
        level = level or 2**phase_bits
        return cls(np.full(n_elements, level, dtype=int), phase_bits)

    @property
    def n_elements(self) -> int:
        return int(self.levels.size)

    @property
    def phases(self) -> np.ndarray:
        """θ_1..θ_N（弧度，取值于 Φ_μ）"""
        return self.levels * phase_step(self.phase_bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReflectionVector):
            return NotImplemented
        return self.phase_bits == other.phase_bits and np.array_equal(self.levels, other.levels)

    def __hash__(self) -> int:
        return hash((self.phase_bits, self.levels.tobytes()))


def reflection_matrix(reflections: Sequence[ReflectionVector]) -> np.ndarray:
    """堆叠为 L×(N+1) 扩展向量矩阵。"""
    return np.vstack([r.extended for r in reflections])
