"""
系统与算法参数配置

SystemConfig 覆盖仿真场景的全部标量参数（阵元数、子载波、时延抽头、功率、
相位比特、几何位置、功率时延谱与莱斯因子、随机种子）。功率以 dBm、莱斯因子以 dB
输入，在模型上一次性换算为线性值，内部计算只读取线性属性。
"""
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple, Type, TypeVar, Union

import yaml  # type: ignore[import-untyped]
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config.settings import settings
from core.exceptions import ConfigError
from core.units import db_to_linear, dbm_to_watts

Position = Tuple[float, float, float]
ModelT = TypeVar("ModelT", bound=BaseModel)


class SystemConfig(BaseModel):
    """仿真系统参数（默认值为典型宽带仿真设置）"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # IRS 阵列
    n_elements: int = Field(default=32, ge=1, description="IRS 反射单元数 N")
    irs_rows: int = Field(default=8, ge=1, description="UPA 行数（沿 z 轴）")
    irs_cols: int = Field(default=4, ge=1, description="UPA 列数（沿 y 轴）")
    element_spacing: float = Field(default=0.5, gt=0, description="单元间距（波长）")
    wavelength_m: float = Field(default=0.1, gt=0, description="载波波长（米）")

    # OFDM 与参考信号
    n_subcarriers: int = Field(default=128, ge=1, description="子载波数 M")
    n_rs_subcarriers: int = Field(default=64, ge=1, description="每个 OFDM 符号的 RS 子载波数 M0")
    n_rs_symbols: int = Field(default=30, ge=1, description="插入 RS 的 OFDM 符号数 Q")
    rs_offset: int = Field(default=0, ge=0, description="首个 RS 子载波下标")

    # 时延抽头
    taps_direct: int = Field(default=4, ge=1, description="BS-用户链路抽头数 K1")
    taps_bs_irs: int = Field(default=4, ge=1, description="BS-IRS 链路抽头数 K2")
    taps_irs_user: int = Field(default=3, ge=1, description="IRS-用户链路抽头数 K3")

    # 功率
    tx_power_dbm: float = Field(default=30.0, description="BS 发射功率 P (dBm)")
    noise_power_dbm: float = Field(default=-90.0, description="噪声功率 σ² (dBm)")

    # 相位与衰落
    phase_bits: int = Field(default=2, ge=1, description="相位控制比特数 μ")
    pdp_decay: float = Field(default=2.0, ge=0, description="指数功率时延谱衰减因子 ε")
    nlos_decay: Optional[float] = Field(
        default=None, ge=0, description="IRS-用户 NLoS 抽头衰减因子，缺省沿用 ε"
    )
    rician_factor_db: float = Field(default=7.0, description="IRS-用户链路莱斯因子 κ (dB)")
    path_loss_enabled: bool = Field(default=True, description="关闭时各链路增益为 1")

    # 几何（米）
    bs_pos: Position = Field(default=(35.0, -20.0, 15.0), description="BS 位置")
    user_pos: Position = Field(default=(0.0, 1.0, 0.0), description="用户位置")
    irs_ref_pos: Position = Field(default=(-2.0, -1.0, 0.0), description="IRS 参考单元（左下角）位置")

    seed: int = Field(
        default_factory=lambda: settings.DEFAULT_SEED, ge=0, description="随机种子"
    )

    @model_validator(mode="after")
    def _check_invariants(self) -> "SystemConfig":
        if self.n_elements != self.irs_rows * self.irs_cols:
            raise ValueError(
                f"n_elements ({self.n_elements}) must equal irs_rows*irs_cols "
                f"({self.irs_rows}*{self.irs_cols})"
            )
        if self.n_rs_subcarriers > self.n_subcarriers:
            raise ValueError("n_rs_subcarriers must not exceed n_subcarriers")
        if self.n_subcarriers % self.n_rs_subcarriers != 0:
            raise ValueError(
                f"n_subcarriers ({self.n_subcarriers}) must be divisible by "
                f"n_rs_subcarriers ({self.n_rs_subcarriers})"
            )
        if self.n_rs_subcarriers < self.max_taps:
            raise ValueError(
                f"n_rs_subcarriers ({self.n_rs_subcarriers}) must be >= "
                f"K = max(K1, K2+K3-1) = {self.max_taps}"
            )
        if self.rs_offset >= self.rs_spacing:
            raise ValueError(f"rs_offset must be < M/M0 = {self.rs_spacing}")
        return self

    # ------------------------------------------------------------------
    # 派生量
    # ------------------------------------------------------------------

    @property
    def tx_power(self) -> float:
        """P（瓦）"""
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def noise_power(self) -> float:
        """σ²（瓦）"""
        return dbm_to_watts(self.noise_power_dbm)

    @property
    def rician_factor(self) -> float:
        """κ（线性）"""
        return db_to_linear(self.rician_factor_db)

    @property
    def cascaded_taps(self) -> int:
        """级联信道抽头数 K_r = K2 + K3 - 1"""
        return self.taps_bs_irs + self.taps_irs_user - 1

    @property
    def max_taps(self) -> int:
        """K = max(K1, K_r)"""
        return max(self.taps_direct, self.cascaded_taps)

    @property
    def rs_spacing(self) -> int:
        return self.n_subcarriers // self.n_rs_subcarriers

    @property
    def effective_nlos_decay(self) -> float:
        return self.pdp_decay if self.nlos_decay is None else self.nlos_decay

    @property
    def phase_step(self) -> float:
        """ω = 2π / 2^μ"""
        return 2.0 * math.pi / (2**self.phase_bits)

    def with_overrides(self, **overrides: Any) -> "SystemConfig":
        """返回覆盖部分字段后的新配置（重新校验）。"""
        return parse_system_config({**self.model_dump(), **overrides})


class TrainingHyper(BaseModel):
    """估计器训练超参数"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    optimizer: Literal["sgd", "adam"] = Field(default="adam", description="sgd(动量) 或 adam")
    step_size: float = Field(default=1e-3, gt=0, description="归一化目标下的步长")
    momentum: float = Field(default=0.9, ge=0, lt=1, description="SGD 动量")
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    adam_eps: float = Field(default=1e-8, gt=0)
    epochs: int = Field(default=1000, ge=1)
    batch_size: int = Field(default=64, ge=1)
    init_scale: float = Field(default=1.0, gt=0)
    split_ratio: float = Field(default=0.9, gt=0, lt=1, description="训练集比例 L1/L")
    early_stop_patience: int = Field(default=100, ge=1)
    plateau_patience: int = Field(default=25, ge=1, description="验证损失停滞多少轮后衰减步长")
    plateau_decay: float = Field(default=0.5, gt=0, le=1)
    convergence_tol: float = Field(default=1e-12, ge=0, description="归一化验证损失低于该值即停止")
    validation_mode: Literal["early_stop", "monitor"] = Field(default="early_stop")
    estimate_noise_floor: bool = Field(default=False, description="由最小 RSRP 估计 σ²")
    noise_margin: float = Field(default=0.05, ge=0, lt=1)
    k_rank: Optional[int] = Field(default=None, ge=1, description="子网络数，缺省为 K")


class OptimizerHyper(BaseModel):
    """反射设计超参数"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    sdr_iterations: int = Field(default=500, ge=1)
    sdr_tol: float = Field(default=1e-10, ge=0, description="相对目标提升低于该值时停止")
    rank_cap: Optional[int] = Field(default=None, ge=1, description="缺省为 ceil(sqrt(2(N+1)))")
    randomization_trials: int = Field(default=200, ge=1)
    refinement_sweeps: int = Field(default=20, ge=1)


def _format_validation_error(exc: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in err['loc']) or 'config'}: {err['msg']}"
        for err in exc.errors()
    )


def parse_model(model_cls: Type[ModelT], data: Dict[str, Any]) -> ModelT:
    """校验字典并构造配置模型，失败抛出 ConfigError。"""
    try:
        return model_cls.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_validation_error(exc), cause=exc) from exc


def parse_system_config(data: Dict[str, Any]) -> SystemConfig:
    return parse_model(SystemConfig, data)


def load_mapping(path: Union[str, Path]) -> Dict[str, Any]:
    """按后缀读取 JSON 或 YAML 文件。"""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(f) or {}
        else:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"Invalid JSON in {path}: {exc}", cause=exc) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"Config root must be a mapping: {path}")
    return data


def load_system_config(path: Union[str, Path]) -> SystemConfig:
    """
    从 JSON/YAML 加载系统配置

    支持顶层直接是字段，或嵌套在 `system`/`base` 键下（实验规格文件）。
    """
    data = load_mapping(path)
    for key in ("system", "base"):
        if isinstance(data.get(key), dict):
            data = data[key]
            break
    return parse_system_config(data)


def config_fingerprint(*models: BaseModel) -> str:
    """配置的 SHA-256 指纹（规范化 JSON）。"""
    payload = [model.model_dump(mode="json") for model in models]
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_hyper(path: Union[str, Path]) -> Tuple[TrainingHyper, OptimizerHyper]:
    """
    从 JSON/YAML 加载训练与求解超参数

    文件可含 `hyper` 与 `optimizer` 两个键（与实验规格同形），缺失的部分取默认值。
    """
    data = load_mapping(path)
    if isinstance(data.get("experiment"), dict):
        data = data["experiment"]
    return (
        parse_model(TrainingHyper, data.get("hyper") or {}),
        parse_model(OptimizerHyper, data.get("optimizer") or {}),
    )
