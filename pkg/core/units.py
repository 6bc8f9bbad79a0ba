"""
单位换算

dBm/dB 只出现在配置解析和报告边界，内部计算全部使用线性值。
"""
import math


def dbm_to_watts(value_dbm: float) -> float:
    return 10.0 ** ((float(value_dbm) - 30.0) / 10.0)


def watts_to_dbm(value_w: float) -> float:
    return 10.0 * math.log10(value_w) + 30.0


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (float(value_db) / 10.0)


def linear_to_db(value: float) -> float:
    """线性功率比转 dB，非正值返回 -inf。"""
    if value <= 0:
        return float("-inf")
    return 10.0 * math.log10(value)
