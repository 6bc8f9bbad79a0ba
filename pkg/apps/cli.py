"""
命令行入口

子命令:
    simulate    生成信道实现并测量 RSRP 数据集（CSV）
    estimate    数据集 -> 自相关矩阵估计 R̂（JSON）
    optimize    R̂ -> 离散相位反射向量（JSON）
    experiment  实验规格 -> 报告（CSV/JSON/Markdown）

运行方式:
    irs-rsrp simulate --n-patterns 2000 --out outputs/run1
    irs-rsrp experiment --name smoke --threads 4

失败时退出码非零，stderr 输出一行 JSON: {"error": <code>, "message": <text>}
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from channel.realization import generate_realization
from config.logging_config import setup_logging
from config.settings import settings
from config.system_config import (
    OptimizerHyper,
    SystemConfig,
    TrainingHyper,
    load_hyper,
    load_system_config,
)
from core.exceptions import IrsSimError
from core.io import atomic_write_text
from core.rng import STREAM_CHANNEL, STREAM_DATASET, STREAM_OPTIMIZE, STREAM_TRAIN, derive_rng
from estimator.model import load_autocorr, nmse, reconstruct_autocorrelation, save_autocorr, save_model
from estimator.training import train_with_history
from harness.registry import ExperimentRegistry
from harness.report import emit_report
from harness.runner import run_experiment
from harness.spec import load_experiment_spec
from measurement.dataset import build_dataset, dataset_from_csv, dataset_to_csv
from optimizer.pipeline import Method, optimize_reflection, result_to_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_DOMAIN = 2


# ============================================================
# 公共
# ============================================================

def _resolve_config(args: argparse.Namespace) -> SystemConfig:
    config = load_system_config(args.config) if args.config else SystemConfig()
    if args.seed is not None:
        config = config.with_overrides(seed=args.seed)
    return config


def _resolve_hyper(args: argparse.Namespace) -> tuple[TrainingHyper, OptimizerHyper]:
    if getattr(args, "hyper", None):
        return load_hyper(args.hyper)
    return TrainingHyper(), OptimizerHyper()


def _output_dir(args: argparse.Namespace, default_name: str) -> Path:
    return Path(args.out) if args.out else settings.OUTPUT_DIR / default_name


def _emit(payload: Dict[str, Any]) -> None:
    """结果写 stdout（单个 JSON 对象）"""
    print(json.dumps(payload, ensure_ascii=False))


# ============================================================
# 子命令
# ============================================================

def cmd_simulate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    hyper, _ = _resolve_hyper(args)
    out_dir = _output_dir(args, "simulate")

    realization = generate_realization(config, derive_rng(config.seed, 0, STREAM_CHANNEL))
    dataset = build_dataset(
        realization,
        config,
        args.n_patterns,
        derive_rng(config.seed, 0, STREAM_DATASET, args.n_patterns),
        split_ratio=hyper.split_ratio,
        noise_power=0.0 if args.noiseless else None,
    )
    dataset_path = dataset_to_csv(dataset, out_dir / "dataset.csv")
    truth_path = save_autocorr(realization.autocorr, out_dir / "autocorr_true.json")
    _emit(
        {
            "dataset": str(dataset_path),
            "autocorr_true": str(truth_path),
            "n_patterns": len(dataset),
            "noise_power_watts": dataset.noise_power,
        }
    )
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    hyper, _ = _resolve_hyper(args)
    out_dir = _output_dir(args, "estimate")

    noise_power = 0.0 if args.noiseless else config.noise_power
    dataset = dataset_from_csv(args.dataset, noise_power, config.phase_bits, hyper.split_ratio)
    k_rank = args.k_rank or hyper.k_rank or config.max_taps
    model, history = train_with_history(
        dataset, k_rank, hyper, derive_rng(config.seed, 0, STREAM_TRAIN)
    )
    estimate = reconstruct_autocorrelation(model)

    payload: Dict[str, Any] = {
        "autocorr": str(save_autocorr(estimate, out_dir / "autocorr.json")),
        "model": str(save_model(model, out_dir / "model.json")),
        "k_rank": k_rank,
        "epochs_run": history.epochs_run,
        "best_epoch": history.best_epoch,
        "stop_reason": history.stop_reason,
    }
    if args.truth:
        payload["nmse"] = nmse(estimate, load_autocorr(args.truth))
    _emit(payload)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    _, optimizer_hyper = _resolve_hyper(args)
    out_dir = _output_dir(args, "optimize")

    autocorr = load_autocorr(args.autocorr)
    result = optimize_reflection(
        autocorr,
        config.phase_bits,
        optimizer_hyper,
        derive_rng(config.seed, 0, STREAM_OPTIMIZE),
        method=Method(args.method),
    )
    payload = result_to_dict(result, config.noise_power)
    path = atomic_write_text(out_dir / "reflection.json", json.dumps(payload, indent=2))
    _emit({**payload, "path": str(path)})
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    if args.spec:
        spec = load_experiment_spec(args.spec)
    else:
        spec = ExperimentRegistry.build_spec(args.name)
    if args.config:
        spec = spec.model_copy(update={"base": load_system_config(args.config)})
    if args.seed is not None:
        spec = spec.with_seed(args.seed)

    report = run_experiment(spec, threads=args.threads)
    out_dir = Path(args.out) if args.out else (spec.output_dir or settings.OUTPUT_DIR / spec.name)
    formats = args.formats or spec.formats
    written = emit_report(report, formats, out_dir)
    _emit(
        {
            "experiment": spec.name,
            "files": {fmt: str(path) for fmt, path in written.items()},
            "flagged": report.flagged_count,
        }
    )
    return EXIT_OK


def cmd_list(args: argparse.Namespace) -> int:
    manifests = (ExperimentRegistry.get(name) for name in ExperimentRegistry.list_all())
    _emit({"experiments": [m.summary() for m in manifests if m is not None]})
    return EXIT_OK


# ============================================================
# 参数解析
# ============================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="SystemConfig JSON/YAML 文件")
    common.add_argument("--seed", type=int, default=None, help="覆盖配置中的随机种子")
    common.add_argument("--out", help="输出目录")
    common.add_argument("--threads", type=int, default=None, help="蒙特卡洛并行线程数")
    common.add_argument("--log-level", default=None, help="DEBUG/INFO/WARNING/ERROR")
    common.add_argument("--log-format", default=None, choices=["text", "json"])

    parser = argparse.ArgumentParser(
        prog="irs-rsrp", description="IRS 辅助宽带 OFDM 系统的 RSRP 仿真、估计与反射设计"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="生成 RSRP 数据集")
    p.add_argument("--n-patterns", type=int, default=1000, help="反射图样数 L")
    p.add_argument("--noiseless", action="store_true", help="不加测量噪声")
    p.add_argument("--hyper", help="超参数文件（取 split_ratio）")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="由数据集估计 R̂")
    p.add_argument("--dataset", required=True, help="simulate 输出的 CSV")
    p.add_argument("--k-rank", type=int, default=None, help="子网络数，缺省为 K")
    p.add_argument("--truth", help="真实 R 的 JSON，给出时输出 NMSE")
    p.add_argument("--noiseless", action="store_true", help="数据集无噪声（σ² 取 0）")
    p.add_argument("--hyper", help="训练超参数文件")
    p.set_defaults(handler=cmd_estimate)

    p = sub.add_parser("optimize", parents=[common], help="由 R̂ 设计反射向量")
    p.add_argument("--autocorr", required=True, help="R̂ 的 JSON")
    p.add_argument(
        "--method",
        default=Method.PROPOSED.value,
        choices=[Method.PROPOSED.value, Method.EXHAUSTIVE.value],
    )
    p.add_argument("--hyper", help="求解超参数文件")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("experiment", parents=[common], help="运行蒙特卡洛实验")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="实验规格 JSON/YAML")
    group.add_argument("--name", help="已注册的实验名")
    p.add_argument(
        "--formats", nargs="+", choices=["csv", "json", "markdown"], default=None
    )
    p.set_defaults(handler=cmd_experiment)

    p = sub.add_parser("list", parents=[common], help="列出已注册实验")
    p.set_defaults(handler=cmd_list)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level, format_type=args.log_format)

    try:
        return int(args.handler(args))
    except IrsSimError as exc:
        print(json.dumps(exc.to_dict(), ensure_ascii=False), file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as exc:  # noqa: BLE001
        logger.exception("未处理的异常")
        print(json.dumps({"error": "internal", "message": str(exc)}), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
