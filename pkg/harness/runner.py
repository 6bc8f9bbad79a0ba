"""
蒙特卡洛实验执行

每个试验抽取一次信道实现，在该试验内所有 L 与方案共享（配对比较）。
随机数子流由 (seed, trial, 用途, L, 方案) 派生，结果与线程数无关；
汇总按试验编号顺序进行。
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple

import numpy as np

from channel.realization import ChannelRealization, generate_realization
from config.settings import settings
from core.exceptions import InsufficientDataError, TrainingDivergedError
from core.reflection import ReflectionVector
from core.rng import STREAM_CHANNEL, STREAM_DATASET, STREAM_OPTIMIZE, STREAM_TRAIN, derive_rng
from estimator.model import nmse, reconstruct_autocorrelation
from estimator.training import train
from harness.report import CellStats, ExperimentReport, Provenance, TrialValue, finite_or_none
from harness.spec import ExperimentSpec
from harness.stats import db_mean_and_stderr, mean_and_stderr
from measurement.dataset import MeasurementDataset, build_dataset
from optimizer.benchmarks import csm_select, rms_select
from optimizer.pipeline import ESTIMATION_METHODS, Method, evaluate_snr, optimize_reflection

logger = logging.getLogger(__name__)

# upper_bound 与 L 无关，用固定键派生子流
_UPPER_BOUND_KEY = 0


def _method_key(method: Method) -> int:
    return list(Method).index(method)


class TrialRunner:
    """单次试验内的状态：信道实现、真实 R 与 upper_bound 缓存"""

    def __init__(self, spec: ExperimentSpec, trial_index: int) -> None:
        self.spec = spec
        self.trial = trial_index
        self.config = spec.base
        self.realization: ChannelRealization = generate_realization(
            self.config, derive_rng(spec.seed, trial_index, STREAM_CHANNEL)
        )
        self.truth = self.realization.autocorr
        self._upper_bound: Optional[ReflectionVector] = None

    def _snr(self, reflection: ReflectionVector) -> float:
        return evaluate_snr(self.truth, reflection, self.config.noise_power)

    def _estimate(
        self, dataset: MeasurementDataset, l_value: int, method: Method
    ) -> Tuple[float, ReflectionVector]:
        k_rank = 1 if method == Method.RANK_ONE else (self.spec.hyper.k_rank or self.config.max_taps)
        key = _method_key(method)
        model = train(
            dataset,
            k_rank,
            self.spec.hyper,
            derive_rng(self.spec.seed, self.trial, STREAM_TRAIN, l_value, key),
        )
        estimate = reconstruct_autocorrelation(model)
        result = optimize_reflection(
            estimate,
            self.config.phase_bits,
            self.spec.optimizer,
            derive_rng(self.spec.seed, self.trial, STREAM_OPTIMIZE, l_value, key),
            method=method,
        )
        return nmse(estimate, self.truth), result.reflection

    def _upper_bound_reflection(self) -> ReflectionVector:
        if self._upper_bound is None:
            result = optimize_reflection(
                self.truth,
                self.config.phase_bits,
                self.spec.optimizer,
                derive_rng(
                    self.spec.seed,
                    self.trial,
                    STREAM_OPTIMIZE,
                    _UPPER_BOUND_KEY,
                    _method_key(Method.UPPER_BOUND),
                ),
                method=Method.UPPER_BOUND,
            )
            self._upper_bound = result.reflection
        return self._upper_bound

    def run_cell(
        self, dataset: MeasurementDataset, l_value: int, method: Method
    ) -> List[TrialValue]:
        """运行一个 (L, 方案) 单元，训练发散或样本不足时返回被标记的记录"""
        base = {"trial": self.trial, "L": l_value, "method": method.value}
        try:
            if method in ESTIMATION_METHODS:
                error, reflection = self._estimate(dataset, l_value, method)
                return [
                    TrialValue(metric="nmse", value=error, **base),
                    TrialValue(metric="snr", value=self._snr(reflection), **base),
                ]
            if method == Method.CSM:
                reflection = csm_select(dataset, self.config.phase_bits)
            elif method == Method.RMS:
                reflection = rms_select(dataset)
            else:
                reflection = self._upper_bound_reflection()
            return [TrialValue(metric="snr", value=self._snr(reflection), **base)]
        except (TrainingDivergedError, InsufficientDataError) as exc:
            logger.warning(
                "试验 %d, L=%d, 方案 %s 被标记: %s", self.trial, l_value, method.value, exc,
                extra={"extra_data": {"trial": self.trial, "L": l_value, "code": exc.code}},
            )
            metrics = ["nmse", "snr"] if method in ESTIMATION_METHODS else ["snr"]
            return [TrialValue(metric=m, flag=exc.code, **base) for m in metrics]

    def run(self) -> List[TrialValue]:
        values: List[TrialValue] = []
        noise_override = 0.0 if self.spec.noiseless_measurements else None
        for l_value in self.spec.l_grid:
            dataset = build_dataset(
                self.realization,
                self.config,
                l_value,
                derive_rng(self.spec.seed, self.trial, STREAM_DATASET, l_value),
                split_ratio=self.spec.hyper.split_ratio,
                noise_power=noise_override,
            )
            for method in self.spec.methods:
                values.extend(self.run_cell(dataset, l_value, method))
        return values


def run_trial(spec: ExperimentSpec, trial_index: int) -> List[TrialValue]:
    """运行单次蒙特卡洛试验（并行的最小单元）"""
    values = TrialRunner(spec, trial_index).run()
    logger.info("试验 %d/%d 完成", trial_index + 1, spec.trials)
    return values


def aggregate(spec: ExperimentSpec, samples: List[TrialValue]) -> List[CellStats]:
    """按 (L, 方案, 指标) 汇总；SNR 在线性域平均后换算为 dB"""
    grouped: Dict[Tuple[int, str, str], List[TrialValue]] = {}
    for sample in samples:
        grouped.setdefault((sample.L, sample.method, sample.metric), []).append(sample)

    cells: List[CellStats] = []
    for l_value in spec.l_grid:
        for method in spec.methods:
            metrics = ["nmse", "snr"] if method in ESTIMATION_METHODS else ["snr"]
            for metric in metrics:
                group = grouped.get((l_value, method.value, metric), [])
                valid = [s.value for s in group if s.flag is None and s.value is not None]
                flagged = len(group) - len(valid)
                if metric == "nmse":
                    mean, stderr = mean_and_stderr(valid)
                else:
                    mean, stderr = db_mean_and_stderr(valid)
                cells.append(
                    CellStats(
                        L=l_value,
                        method=method.value,
                        metric="nmse" if metric == "nmse" else "snr_db",
                        mean=finite_or_none(mean),
                        stderr=finite_or_none(stderr),
                        trials=len(valid),
                        flagged=flagged,
                    )
                )
    return cells


def run_experiment(spec: ExperimentSpec, threads: Optional[int] = None) -> ExperimentReport:
    """
    运行实验并汇总

    Args:
        spec: 实验规格
        threads: 并行线程数，缺省取 settings.THREADS

    Returns:
        ExperimentReport
    """
    threads = max(int(threads or settings.THREADS), 1)
    logger.info(
        "开始实验 %s: trials=%d, L=%s, methods=%s, threads=%d",
        spec.name,
        spec.trials,
        spec.l_grid,
        [m.value for m in spec.methods],
        threads,
    )

    # 1. 并行执行试验，map 按试验编号返回
    if threads == 1:
        per_trial = [run_trial(spec, i) for i in range(spec.trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_trial = list(pool.map(lambda i: run_trial(spec, i), range(spec.trials)))
    samples = [value for trial_values in per_trial for value in trial_values]

    # 2. 汇总
    cells = aggregate(spec, samples)
    provenance = Provenance(
        name=spec.name,
        config_hash=spec.fingerprint(),
        seed=spec.seed,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        trials=spec.trials,
        l_grid=list(spec.l_grid),
        methods=[m.value for m in spec.methods],
    )
    report = ExperimentReport(provenance=provenance, cells=cells, samples=samples)
    if report.flagged_count:
        logger.warning("实验 %s 共有 %d 个被标记的样本", spec.name, report.flagged_count)
    logger.info("实验 %s 完成", spec.name)
    return report


def summarize_snr_gap(report: ExperimentReport, method: str = Method.PROPOSED.value) -> List[float]:
    """upper_bound 与指定方案的平均 SNR 差（dB），按 L 网格顺序"""
    gaps = []
    for l_value in report.provenance.l_grid:
        upper = report.cell(l_value, Method.UPPER_BOUND.value, "snr_db").mean
        other = report.cell(l_value, method, "snr_db").mean
        gaps.append(float(np.nan) if upper is None or other is None else upper - other)
    return gaps
