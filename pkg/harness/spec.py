"""
实验规格

一个实验 = 系统配置 + L 网格 + 方案列表 + 蒙特卡洛次数 + 训练/求解超参数。
"""
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.system_config import (
    OptimizerHyper,
    SystemConfig,
    TrainingHyper,
    config_fingerprint,
    load_mapping,
    parse_model,
)
from optimizer.pipeline import Method

ReportFormat = Literal["csv", "json", "markdown"]


class ExperimentSpec(BaseModel):
    """蒙特卡洛实验规格"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(default="experiment", min_length=1)
    description: str = ""
    base: SystemConfig = Field(default_factory=SystemConfig)
    l_grid: List[int] = Field(..., description="反射图样数 L 的取值，严格递增")
    methods: List[Method] = Field(default_factory=lambda: [Method.PROPOSED])
    trials: int = Field(default=1, ge=1)
    hyper: TrainingHyper = Field(default_factory=TrainingHyper)
    optimizer: OptimizerHyper = Field(default_factory=OptimizerHyper)
    noiseless_measurements: bool = Field(
        default=False, description="数据集不加噪声（SNR 仍按 σ² 计算）"
    )
    output_dir: Optional[Path] = None
    formats: List[ReportFormat] = Field(default_factory=lambda: ["csv", "json"])

    @field_validator("l_grid")
    @classmethod
    def _check_l_grid(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("l_grid must not be empty")
        if any(l < 2 for l in value):
            raise ValueError("every L must be >= 2")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("l_grid must be strictly increasing")
        return value

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, value: List[Method]) -> List[Method]:
        if not value:
            raise ValueError("methods must not be empty")
        if Method.EXHAUSTIVE in value:
            raise ValueError("exhaustive search is a test oracle, not an experiment method")
        if len(set(value)) != len(value):
            raise ValueError("methods must be unique")
        return value

    @property
    def seed(self) -> int:
        return self.base.seed

    def fingerprint(self) -> str:
        """除输出位置外全部字段的哈希"""
        return config_fingerprint(self.model_copy(update={"output_dir": None, "formats": []}))

    def with_seed(self, seed: int) -> "ExperimentSpec":
        return self.model_copy(update={"base": self.base.with_overrides(seed=seed)})


def parse_experiment_spec(data: Dict[str, Any]) -> ExperimentSpec:
    """校验字典，失败抛出 ConfigError"""
    return parse_model(ExperimentSpec, data)


def load_experiment_spec(path: Union[str, Path]) -> ExperimentSpec:
    """
    从 JSON/YAML 加载实验规格

    manifest 格式下规格位于 `experiment` 键。
    """
    data = load_mapping(path)
    if isinstance(data.get("experiment"), dict):
        data = data["experiment"]
    return parse_experiment_spec(data)
