"""
距离相关路径损耗模型
"""
import math
from enum import Enum

from core.exceptions import InvalidArgumentError


class LinkType(str, Enum):
    """三段链路"""
    DIRECT = "direct"          # BS-用户
    BS_IRS = "bs_irs"          # BS-IRS
    IRS_USER = "irs_user"      # IRS-用户


# (截距 dB, 斜率 dB/decade)
PATH_LOSS_PARAMS = {
    LinkType.DIRECT: (33.0, 37.0),
    LinkType.BS_IRS: (30.0, 20.0),
    LinkType.IRS_USER: (30.0, 20.0),
}


def path_loss_db(link_id: "LinkType | str", distance: float) -> float:
    """
    计算链路路径损耗

    Args:
        link_id: 链路类型
        distance: 距离（米），必须为正

    Returns:
        路径损耗（dB）
    """
    if not distance > 0:
        raise InvalidArgumentError(f"distance must be > 0, got {distance}")
    try:
        link = LinkType(link_id)
    except ValueError as exc:
        raise InvalidArgumentError(f"unknown link type: {link_id}", cause=exc) from exc
    intercept, slope = PATH_LOSS_PARAMS[link]
    return intercept + slope * math.log10(distance)


def link_gain(link_id: "LinkType | str", distance: float) -> float:
    """线性链路增益 10^{-β/10}"""
    return 10.0 ** (-path_loss_db(link_id, distance) / 10.0)
