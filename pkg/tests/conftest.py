"""
Pytest 配置：确保项目根目录在导入路径中，并提供共享的小规模系统配置。
"""
import os
import sys

import numpy as np
import pytest

PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.abspath(os.path.join(PROJECT_ROOT, os.pardir))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from config.system_config import SystemConfig  # noqa: E402


SMALL_SYSTEM = {
    "n_elements": 4,
    "irs_rows": 2,
    "irs_cols": 2,
    "n_subcarriers": 16,
    "n_rs_subcarriers": 8,
    "n_rs_symbols": 4,
    "taps_direct": 2,
    "taps_bs_irs": 2,
    "taps_irs_user": 2,
    "phase_bits": 2,
    "seed": 7,
}


@pytest.fixture
def small_config() -> SystemConfig:
    """N=4、M=16、K=3 的小规模配置"""
    return SystemConfig(**SMALL_SYSTEM)


def random_psd(rng: np.random.Generator, dimension: int, rank: int) -> np.ndarray:
    """秩为 rank 的随机 Hermitian 半正定矩阵"""
    a = rng.standard_normal((dimension, rank)) + 1j * rng.standard_normal((dimension, rank))
    return a @ a.conj().T
