"""
FastAPI 入口
"""
# 在最开始加载环境变量，确保 Settings 读取到 .env
from dotenv import load_dotenv
load_dotenv()

import logging
import time
import uuid
from datetime import datetime
from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from channel.realization import generate_realization
from config.logging_config import setup_logging
from config.settings import settings
from config.system_config import OptimizerHyper, SystemConfig, TrainingHyper
from core.exceptions import ConfigError, InvalidArgumentError, IrsSimError, ReportIOError
from core.reflection import phase_step
from core.rng import STREAM_CHANNEL, STREAM_DATASET, STREAM_OPTIMIZE, STREAM_TRAIN, derive_rng
from core.units import dbm_to_watts
from estimator.model import autocorr_from_dict, autocorr_to_dict, nmse, reconstruct_autocorrelation
from estimator.training import train_with_history
from harness.registry import ExperimentRegistry
from harness.runner import run_experiment
from harness.spec import ExperimentSpec
from measurement.dataset import build_dataset, dataset_from_phases
from optimizer.pipeline import Method, optimize_reflection, result_to_dict

# 初始化日志配置
setup_logging()
logger = logging.getLogger(__name__)

VERSION = "1.0.0"

app = FastAPI(
    title="IRS RSRP 仿真服务",
    description="IRS 辅助宽带 OFDM 系统的 RSRP 仿真、自相关矩阵估计与离散相位反射设计",
    version=VERSION,
)

# CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.CORS_ALLOW_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.middleware("http")
async def add_request_context(request: Request, call_next):
    request_id = request.headers.get("X-Request-ID") or str(uuid.uuid4())
    started = time.perf_counter()
    response = None
    try:
        response = await call_next(request)
        return response
    finally:
        status_code = response.status_code if response else 500
        logger.info(
            "request_id=%s method=%s path=%s status=%s elapsed_ms=%.1f",
            request_id,
            request.method,
            request.url.path,
            status_code,
            (time.perf_counter() - started) * 1000.0,
        )


@app.exception_handler(IrsSimError)
async def domain_exception_handler(request: Request, exc: IrsSimError):
    if isinstance(exc, ConfigError):
        status_code = 422
    elif isinstance(exc, ReportIOError):
        status_code = 500
    else:
        status_code = 400
    logger.warning("请求失败 path=%s code=%s: %s", request.url.path, exc.code, exc.message)
    return JSONResponse(status_code=status_code, content={"detail": exc.message, "code": exc.code})


@app.exception_handler(Exception)
async def unhandled_exception_handler(request: Request, exc: Exception):
    logger.exception("Unhandled error path=%s", request.url.path)
    detail = str(exc) if settings.DEBUG else "Internal Server Error"
    return JSONResponse(status_code=500, content={"detail": detail, "code": "internal"})


# 请求/响应模型
class AutocorrPayload(BaseModel):
    """复矩阵，行内实部/虚部交错"""
    dimension: int = Field(..., ge=1)
    rows: List[List[float]]


class SimulateRequest(BaseModel):
    system: SystemConfig = Field(default_factory=SystemConfig)
    n_patterns: int = Field(default=200, ge=2, description="反射图样数 L")
    noiseless: bool = Field(default=False, description="不加测量噪声")
    seed: Optional[int] = Field(None, description="覆盖 system.seed")


class SimulateResponse(BaseModel):
    phases: List[List[float]]
    rsrp_watts: List[float]
    noise_power_watts: float
    autocorr_true: AutocorrPayload


class EstimateRequest(BaseModel):
    system: SystemConfig = Field(default_factory=SystemConfig)
    phases: List[List[float]] = Field(..., description="L×N 相位（弧度）")
    rsrp_watts: List[float] = Field(..., description="L 条 RSRP（瓦）")
    noiseless: bool = False
    k_rank: Optional[int] = Field(None, ge=1)
    hyper: TrainingHyper = Field(default_factory=TrainingHyper)
    autocorr_true: Optional[AutocorrPayload] = Field(None, description="给出时返回 NMSE")
    seed: Optional[int] = None


class EstimateResponse(BaseModel):
    autocorr: AutocorrPayload
    k_rank: int
    epochs_run: int
    best_epoch: int
    stop_reason: str
    nmse: Optional[float] = None


class OptimizeRequest(BaseModel):
    autocorr: AutocorrPayload
    phase_bits: int = Field(default=2, ge=1)
    noise_power_dbm: float = Field(default=-90.0)
    method: Method = Method.PROPOSED
    optimizer: OptimizerHyper = Field(default_factory=OptimizerHyper)
    seed: int = 0


class ExperimentRequest(BaseModel):
    name: Optional[str] = Field(None, description="已注册的实验名")
    spec: Optional[ExperimentSpec] = Field(None, description="内联实验规格")
    seed: Optional[int] = None


def _seeded(system: SystemConfig, seed: Optional[int]) -> SystemConfig:
    return system if seed is None else system.with_overrides(seed=seed)


@app.get("/")
def root():
    """健康检查（公开端点）"""
    return {"service": "IRS RSRP Simulator", "status": "running", "version": VERSION}


@app.get("/health")
def health_check():
    """健康检查端点（公开）"""
    return {
        "status": "healthy",
        "env": settings.ENV,
        "timestamp": datetime.now().isoformat(),
        "version": VERSION,
    }


@app.get("/experiments")
def list_experiments():
    """已注册实验列表"""
    return {
        "experiments": [
            manifest.summary()
            for manifest in (ExperimentRegistry.get(n) for n in ExperimentRegistry.list_all())
            if manifest is not None
        ]
    }


@app.post("/simulate", response_model=SimulateResponse)
def simulate(request: SimulateRequest):
    """生成信道实现并测量 RSRP 数据集"""
    if request.n_patterns > settings.API_MAX_PATTERNS:
        raise InvalidArgumentError(
            f"n_patterns {request.n_patterns} exceeds limit {settings.API_MAX_PATTERNS}"
        )
    config = _seeded(request.system, request.seed)
    realization = generate_realization(config, derive_rng(config.seed, 0, STREAM_CHANNEL))
    dataset = build_dataset(
        realization,
        config,
        request.n_patterns,
        derive_rng(config.seed, 0, STREAM_DATASET, request.n_patterns),
        noise_power=0.0 if request.noiseless else None,
    )
    phases = dataset.phase_levels * phase_step(config.phase_bits)
    return SimulateResponse(
        phases=phases.tolist(),
        rsrp_watts=dataset.rsrp.tolist(),
        noise_power_watts=dataset.noise_power,
        autocorr_true=AutocorrPayload(**autocorr_to_dict(realization.autocorr)),
    )


@app.post("/estimate", response_model=EstimateResponse)
def estimate(request: EstimateRequest):
    """由 RSRP 数据估计自相关矩阵"""
    if len(request.phases) != len(request.rsrp_watts):
        raise InvalidArgumentError(
            f"phases has {len(request.phases)} rows but rsrp_watts has {len(request.rsrp_watts)}"
        )
    if len(request.phases) > settings.API_MAX_PATTERNS:
        raise InvalidArgumentError(f"dataset exceeds limit {settings.API_MAX_PATTERNS}")
    config = _seeded(request.system, request.seed)
    noise_power = 0.0 if request.noiseless else config.noise_power
    dataset = dataset_from_phases(
        request.phases, request.rsrp_watts, noise_power, config.phase_bits, request.hyper.split_ratio
    )

    k_rank = request.k_rank or request.hyper.k_rank or config.max_taps
    model, history = train_with_history(
        dataset, k_rank, request.hyper, derive_rng(config.seed, 0, STREAM_TRAIN)
    )
    estimate_matrix = reconstruct_autocorrelation(model)
    error = None
    if request.autocorr_true is not None:
        error = nmse(estimate_matrix, autocorr_from_dict(request.autocorr_true.model_dump()))
    return EstimateResponse(
        autocorr=AutocorrPayload(**autocorr_to_dict(estimate_matrix)),
        k_rank=k_rank,
        epochs_run=history.epochs_run,
        best_epoch=history.best_epoch,
        stop_reason=history.stop_reason,
        nmse=error,
    )


@app.post("/optimize")
def optimize(request: OptimizeRequest) -> Dict[str, Any]:
    """由 R̂ 设计离散相位反射向量"""
    if request.method not in (Method.PROPOSED, Method.EXHAUSTIVE):
        raise HTTPException(status_code=400, detail="method must be proposed or exhaustive")
    autocorr = autocorr_from_dict(request.autocorr.model_dump())
    result = optimize_reflection(
        autocorr,
        request.phase_bits,
        request.optimizer,
        derive_rng(request.seed, 0, STREAM_OPTIMIZE),
        method=request.method,
    )
    return result_to_dict(result, dbm_to_watts(request.noise_power_dbm))


@app.post("/experiment")
def experiment(request: ExperimentRequest) -> Dict[str, Any]:
    """运行蒙特卡洛实验，返回 JSON 报告"""
    if request.spec is not None:
        spec = request.spec
    elif request.name:
        spec = ExperimentRegistry.build_spec(request.name)
    else:
        raise InvalidArgumentError("either name or spec is required")
    if request.seed is not None:
        spec = spec.with_seed(request.seed)
    if spec.trials > settings.API_MAX_TRIALS:
        raise InvalidArgumentError(f"trials {spec.trials} exceeds limit {settings.API_MAX_TRIALS}")
    if max(spec.l_grid) > settings.API_MAX_PATTERNS:
        raise InvalidArgumentError(f"L exceeds limit {settings.API_MAX_PATTERNS}")
    report = run_experiment(spec)
    return report.model_dump(mode="json")


def main() -> None:
    import uvicorn

    uvicorn.run("apps.api.main:app", host=settings.API_HOST, port=settings.API_PORT)


if __name__ == "__main__":
    main()
