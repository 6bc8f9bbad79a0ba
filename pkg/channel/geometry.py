"""
仿真几何

IRS 平行于 y-z 平面放置，参考单元（左下角）位于 irs_ref_pos，
列沿 +y、行沿 +z 排布，间距 element_spacing 个波长。
"""
from typing import Dict

import numpy as np

from config.system_config import SystemConfig


def irs_element_positions(config: SystemConfig) -> np.ndarray:
    """
    各反射单元坐标

    Returns:
        (N, 3) 数组，行优先（同一行内按列递增）
    """
    spacing_m = config.element_spacing * config.wavelength_m
    rows, cols = np.meshgrid(
        np.arange(config.irs_rows), np.arange(config.irs_cols), indexing="ij"
    )
    offsets = np.stack(
        [np.zeros(rows.size), cols.reshape(-1) * spacing_m, rows.reshape(-1) * spacing_m],
        axis=1,
    )
    return np.asarray(config.irs_ref_pos, dtype=float)[None, :] + offsets


def link_distances(config: SystemConfig) -> Dict[str, float]:
    """
    三段链路距离（米），IRS 端取参考单元

    Returns:
        {"direct": d1, "bs_irs": d2, "irs_user": d3}
    """
    bs = np.asarray(config.bs_pos, dtype=float)
    user = np.asarray(config.user_pos, dtype=float)
    irs = np.asarray(config.irs_ref_pos, dtype=float)
    return {
        "direct": float(np.linalg.norm(bs - user)),
        "bs_irs": float(np.linalg.norm(bs - irs)),
        "irs_user": float(np.linalg.norm(irs - user)),
    }


def los_phasors(config: SystemConfig) -> np.ndarray:
    """IRS-用户 LoS 分量的逐单元相位 e^{-j2π d_n/λ}"""
    user = np.asarray(config.user_pos, dtype=float)
    distances = np.linalg.norm(irs_element_positions(config) - user[None, :], axis=1)
    return np.exp(-2j * np.pi * distances / config.wavelength_m)
