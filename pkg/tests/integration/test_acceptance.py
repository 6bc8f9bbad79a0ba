"""
端到端验收测试

测试覆盖:
- smoke 实验端到端（注册 -> 运行 -> 写报告 -> 读回）
- 无噪声数据集下秩 K 估计的恢复精度
- 宽带信道下秩 K 优于秩一，且 NMSE 随 L 增大而下降
- 全规模 SNR 排序：proposed 优于 CSM/RMS，与上界差距随 L 缩小，μ=2 优于 μ=1

除 smoke 外均为分钟级，标记为 slow（pytest -m "not slow" 跳过）。
"""
import numpy as np
import pytest

from channel.realization import generate_realization
from config.system_config import SystemConfig, TrainingHyper
from core.rng import STREAM_CHANNEL, STREAM_DATASET, STREAM_TRAIN, derive_rng
from estimator.model import nmse, reconstruct_autocorrelation
from estimator.training import train
from harness.registry import ExperimentRegistry
from harness.report import emit_report, load_report
from harness.runner import run_experiment, summarize_snr_gap
from harness.spec import parse_experiment_spec
from harness.stats import paired_sign_test
from measurement.dataset import build_dataset
from optimizer.pipeline import Method


def _mean(values):
    finite = [v for v in values if v is not None]
    return float(np.mean(finite))


class TestSmokeExperiment:
    """smoke 实验端到端测试"""

    def test_smoke_end_to_end(self, tmp_path):
        """测试 smoke 实验全部单元格有结果，报告可读回"""
        spec = ExperimentRegistry.build_spec("smoke")
        report = run_experiment(spec, threads=2)

        # 2 个估计方案 × 2 指标 + 3 个基准方案 × 1 指标，每个 L
        assert len(report.cells) == len(spec.l_grid) * 7
        for cell in report.cells:
            assert cell.trials + cell.flagged == spec.trials

        written = emit_report(report, spec.formats, tmp_path)
        assert load_report(written["json"]) == report
        assert written["markdown"].read_text(encoding="utf-8").startswith("# 实验报告：smoke")


@pytest.mark.slow
class TestEstimatorRecovery:
    """估计器恢复精度验收"""

    def test_noiseless_rank_k_recovery(self):
        """测试 N=16、L=2000 无噪声时 10 次中至少 9 次 NMSE < 1e-2"""
        config = SystemConfig(
            n_elements=16,
            irs_rows=4,
            irs_cols=4,
            n_subcarriers=64,
            n_rs_subcarriers=32,
            taps_direct=2,
            taps_bs_irs=2,
            taps_irs_user=2,
            seed=11,
        )
        hits = 0
        for trial in range(10):
            realization = generate_realization(config, derive_rng(config.seed, trial, STREAM_CHANNEL))
            dataset = build_dataset(
                realization,
                config,
                2000,
                derive_rng(config.seed, trial, STREAM_DATASET),
                noise_power=0.0,
            )
            model = train(
                dataset,
                config.max_taps,
                TrainingHyper(),
                derive_rng(config.seed, trial, STREAM_TRAIN),
            )
            if nmse(reconstruct_autocorrelation(model), realization.autocorr) < 1e-2:
                hits += 1
        assert hits >= 9


@pytest.mark.slow
class TestWidebandEstimation:
    """宽带信道下估计 NMSE 的排序验收"""

    @pytest.fixture(scope="class")
    def report(self):
        spec = parse_experiment_spec(
            {
                "name": "wideband_nmse",
                "base": {
                    "n_elements": 16,
                    "irs_rows": 4,
                    "irs_cols": 4,
                    "seed": 2024,
                },
                "l_grid": [500, 2000, 4000],
                "methods": ["proposed", "rank_one"],
                "trials": 10,
            }
        )
        return run_experiment(spec)

    def test_rank_k_beats_rank_one(self, report):
        """测试 L=2000 时秩 K 的 NMSE 低于秩一（单侧符号检验 5%）"""
        rank_k = report.values(2000, "proposed", "nmse")
        rank_one = report.values(2000, "rank_one", "nmse")
        assert None not in rank_k and None not in rank_one
        assert np.mean(rank_k) < np.mean(rank_one)
        assert paired_sign_test(rank_one, rank_k) < 0.05

    def test_nmse_decreases_with_l(self, report):
        """测试 L=4000 的 NMSE 低于 L=500"""
        small = report.values(500, "proposed", "nmse")
        large = report.values(4000, "proposed", "nmse")
        assert None not in small and None not in large
        assert _mean(large) < _mean(small)
        assert paired_sign_test(small, large) < 0.05


@pytest.mark.slow
class TestSnrOrdering:
    """全规模 SNR 排序验收"""

    @pytest.fixture(scope="class")
    def report_mu2(self):
        return run_experiment(ExperimentRegistry.build_spec("snr_vs_l_mu2"))

    def test_proposed_beats_benchmarks(self, report_mu2):
        """测试 L=2000 时 proposed 的平均 SNR 高于 CSM 与 RMS"""
        proposed = report_mu2.cell(2000, "proposed", "snr_db").mean
        assert proposed > report_mu2.cell(2000, "csm", "snr_db").mean
        assert proposed > report_mu2.cell(2000, "rms", "snr_db").mean

    def test_gap_to_upper_bound_shrinks(self, report_mu2):
        """测试与上界的差距随 L 单调缩小"""
        gaps = summarize_snr_gap(report_mu2)
        assert all(np.isfinite(gaps))
        assert all(b < a for a, b in zip(gaps, gaps[1:]))

    def test_more_phase_bits_help(self, report_mu2):
        """测试 μ=2 的平均 SNR 高于 μ=1"""
        spec = ExperimentRegistry.build_spec("snr_vs_l_mu1").model_copy(
            update={"l_grid": [2000], "methods": [Method.PROPOSED]}
        )
        report_mu1 = run_experiment(spec)
        assert (
            report_mu2.cell(2000, "proposed", "snr_db").mean
            > report_mu1.cell(2000, "proposed", "snr_db").mean
        )
