"""
配置模块
"""
from config.settings import settings
from config.system_config import (
    OptimizerHyper,
    SystemConfig,
    TrainingHyper,
    load_hyper,
    load_system_config,
    parse_model,
)

__all__ = [
    "settings",
    "SystemConfig",
    "TrainingHyper",
    "OptimizerHyper",
    "load_system_config",
    "load_hyper",
    "parse_model",
]
