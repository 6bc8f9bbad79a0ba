"""
公共基础：异常、单位换算、随机数流、反射向量
"""
from core.exceptions import (
    ConfigError,
    InsufficientDataError,
    InvalidArgumentError,
    IrsSimError,
    ProblemTooLargeError,
    ReportIOError,
    TrainingDivergedError,
)
from core.reflection import (
    ReflectionVector,
    phase_alphabet,
    phase_step,
    quantize_levels,
    quantize_to_alphabet,
)

__all__ = [
    "IrsSimError",
    "InvalidArgumentError",
    "ConfigError",
    "TrainingDivergedError",
    "InsufficientDataError",
    "ProblemTooLargeError",
    "ReportIOError",
    "ReflectionVector",
    "phase_alphabet",
    "phase_step",
    "quantize_levels",
    "quantize_to_alphabet",
]
