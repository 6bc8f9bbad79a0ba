"""
蒙特卡洛执行、统计与报告测试

测试覆盖:
- 均值/标准误、dB 换算、配对符号检验
- 汇总：SNR 线性域平均、被标记样本不计入
- 实验执行：单元格数量、配对共享、线程数无关
- 报告：CSV 列、JSON 读回、Markdown 渲染、格式与路径错误
"""
import math

import numpy as np
import pytest

from core.exceptions import InvalidArgumentError, ReportIOError
from harness.report import (
    CSV_COLUMNS,
    TrialValue,
    emit_report,
    load_report,
    render_csv,
    render_markdown,
)
from harness.runner import aggregate, run_experiment, summarize_snr_gap
from harness.spec import parse_experiment_spec
from harness.stats import db_mean_and_stderr, mean_and_stderr, paired_sign_test
from tests.conftest import SMALL_SYSTEM


def _spec(**overrides):
    data = {
        "name": "unit",
        "base": dict(SMALL_SYSTEM),
        "l_grid": [20, 40],
        "methods": ["rms", "upper_bound"],
        "trials": 2,
        "optimizer": {"sdr_iterations": 50, "randomization_trials": 20},
    }
    data.update(overrides)
    return parse_experiment_spec(data)


class TestStats:
    """统计函数测试"""

    def test_mean_and_stderr_empty(self):
        """测试空序列返回 nan"""
        mean, stderr = mean_and_stderr([])
        assert math.isnan(mean) and math.isnan(stderr)

    def test_mean_and_stderr_single(self):
        """测试单样本标准误为 0"""
        assert mean_and_stderr([5.0]) == (5.0, 0.0)

    def test_mean_and_stderr_many(self):
        """测试 s/√n"""
        mean, stderr = mean_and_stderr([1.0, 2.0, 3.0])
        assert mean == pytest.approx(2.0)
        assert stderr == pytest.approx(1.0 / math.sqrt(3.0))

    def test_db_mean_linear_average(self):
        """测试先线性平均再换算 dB"""
        mean, stderr = db_mean_and_stderr([1.0, 3.0])
        assert mean == pytest.approx(10.0 * math.log10(2.0))
        assert stderr == pytest.approx(10.0 / math.log(10.0) * 1.0 / 2.0)

    def test_db_mean_non_positive(self):
        """测试均值非正时返回 nan"""
        mean, _ = db_mean_and_stderr([0.0, 0.0])
        assert math.isnan(mean)

    def test_sign_test_all_wins(self):
        """测试 10 对全胜时 p = 2^-10"""
        p = paired_sign_test(np.arange(10) + 1.0, np.arange(10))
        assert p == pytest.approx(0.5**10)

    def test_sign_test_ties_ignored(self):
        """测试全部相等时 p = 1"""
        assert paired_sign_test([1.0, 2.0], [1.0, 2.0]) == 1.0

    def test_sign_test_length_mismatch(self):
        """测试配对长度不一致报错"""
        with pytest.raises(InvalidArgumentError):
            paired_sign_test([1.0, 2.0], [1.0])


class TestAggregate:
    """汇总测试"""

    def test_snr_linear_average_and_flags(self):
        """测试 SNR 线性平均且被标记样本不计入"""
        spec = _spec(l_grid=[10], methods=["rms"], trials=3)
        samples = [
            TrialValue(trial=0, L=10, method="rms", metric="snr", value=1.0),
            TrialValue(trial=1, L=10, method="rms", metric="snr", value=3.0),
            TrialValue(trial=2, L=10, method="rms", metric="snr", flag="insufficient_data"),
        ]
        (cell,) = aggregate(spec, samples)
        assert cell.metric == "snr_db"
        assert cell.mean == pytest.approx(10.0 * math.log10(2.0))
        assert cell.trials == 2
        assert cell.flagged == 1

    def test_all_flagged_cell(self):
        """测试全部被标记时均值与标准误为空"""
        spec = _spec(l_grid=[10], methods=["proposed"], trials=1)
        samples = [
            TrialValue(trial=0, L=10, method="proposed", metric=m, flag="training_diverged")
            for m in ["nmse", "snr"]
        ]
        cells = aggregate(spec, samples)
        assert [c.metric for c in cells] == ["nmse", "snr_db"]
        for cell in cells:
            assert cell.mean is None
            assert cell.stderr is None
            assert cell.trials == 0
            assert cell.flagged == 1


class TestRunExperiment:
    """实验执行测试"""

    def test_cells_and_pairing(self):
        """测试单元格数量与 upper_bound 在各 L 间共享"""
        spec = _spec()
        report = run_experiment(spec, threads=1)
        assert len(report.cells) == 4
        assert report.flagged_count == 0
        for cell in report.cells:
            assert cell.trials == 2
            assert cell.mean is not None
            assert cell.stderr >= 0
        assert report.values(20, "upper_bound", "snr") == report.values(40, "upper_bound", "snr")
        assert report.provenance.config_hash == spec.fingerprint()
        assert report.provenance.methods == ["rms", "upper_bound"]

    def test_thread_count_independent(self):
        """测试线程数不同时 CSV 逐字节相同"""
        spec = _spec(trials=3)
        single = render_csv(run_experiment(spec, threads=1))
        pooled = render_csv(run_experiment(spec, threads=2))
        assert single == pooled

    def test_deterministic_samples(self):
        """测试相同种子逐试验数值相同，换种子后不同"""
        spec = _spec(l_grid=[20], methods=["rms"])
        a = run_experiment(spec, threads=1)
        b = run_experiment(spec, threads=1)
        c = run_experiment(spec.with_seed(123), threads=1)
        assert a.values(20, "rms", "snr") == b.values(20, "rms", "snr")
        assert a.values(20, "rms", "snr") != c.values(20, "rms", "snr")

    def test_estimation_methods_report_nmse(self):
        """测试估计类方案同时输出 NMSE 与 SNR"""
        spec = _spec(
            l_grid=[30],
            methods=["proposed", "rank_one"],
            trials=1,
            hyper={"epochs": 20, "batch_size": 8},
        )
        report = run_experiment(spec, threads=1)
        for method in ["proposed", "rank_one"]:
            nmse = report.cell(30, method, "nmse")
            snr = report.cell(30, method, "snr_db")
            assert nmse.mean is not None and nmse.mean > 0
            assert snr.mean is not None and math.isfinite(snr.mean)

    def test_noiseless_measurements(self):
        """测试无噪声数据集下实验正常完成"""
        report = run_experiment(_spec(noiseless_measurements=True, trials=1), threads=1)
        assert report.flagged_count == 0

    def test_csm_flagged_when_cells_empty(self):
        """测试 L=2 时 CSM 条件样本不足被标记，不中断实验"""
        spec = _spec(l_grid=[2], methods=["csm", "rms"])
        report = run_experiment(spec, threads=1)
        csm = report.cell(2, "csm", "snr_db")
        assert csm.flagged == 2
        assert csm.trials == 0
        assert csm.mean is None
        assert report.cell(2, "rms", "snr_db").trials == 2
        assert report.values(2, "csm", "snr") == [None, None]
        assert "2,csm,snr_db,,,0" in render_csv(report)

    def test_snr_gap(self):
        """测试 upper_bound 与指定方案的 SNR 差"""
        report = run_experiment(_spec(trials=1), threads=1)
        gaps = summarize_snr_gap(report, method="rms")
        assert len(gaps) == 2
        for l_value, gap in zip([20, 40], gaps):
            expected = (
                report.cell(l_value, "upper_bound", "snr_db").mean
                - report.cell(l_value, "rms", "snr_db").mean
            )
            assert gap == pytest.approx(expected)


@pytest.fixture(scope="module")
def flagged_report():
    """L=2 时 CSM 被标记、L=40 时正常的小规模报告"""
    return run_experiment(_spec(l_grid=[2, 40], methods=["csm", "rms"], trials=1), threads=1)


class TestReport:
    """报告输出测试"""

    def test_csv_header(self, flagged_report):
        """测试 CSV 列顺序"""
        header = render_csv(flagged_report).splitlines()[0]
        assert header.split(",") == CSV_COLUMNS

    def test_emit_and_load(self, flagged_report, tmp_path):
        """测试三种格式写出，JSON 可读回"""
        written = emit_report(flagged_report, ["csv", "json", "markdown"], tmp_path)
        assert set(written) == {"csv", "json", "markdown"}
        for path in written.values():
            assert path.exists()
        loaded = load_report(written["json"])
        assert loaded == flagged_report
        assert loaded.flagged_count == 1

    def test_markdown_missing_values(self, flagged_report):
        """测试 Markdown 中缺失值显示为 n/a 并提示被标记单元"""
        text = render_markdown(flagged_report)
        assert "# 实验报告：unit" in text
        assert "n/a" in text
        assert "被标记" in text

    def test_unknown_format(self, flagged_report, tmp_path):
        """测试未知格式报错"""
        with pytest.raises(InvalidArgumentError):
            emit_report(flagged_report, ["xml"], tmp_path)

    def test_unwritable_directory(self, flagged_report, tmp_path):
        """测试输出目录不可写时报 ReportIOError"""
        blocker = tmp_path / "blocker"
        blocker.write_text("x", encoding="utf-8")
        with pytest.raises(ReportIOError):
            emit_report(flagged_report, ["csv"], blocker / "out")

    def test_load_missing(self, tmp_path):
        """测试读取不存在的报告"""
        with pytest.raises(ReportIOError):
            load_report(tmp_path / "missing.json")

    def test_load_malformed(self, tmp_path):
        """测试读取格式错误的报告"""
        path = tmp_path / "bad.json"
        path.write_text('{"cells": 1}', encoding="utf-8")
        with pytest.raises(InvalidArgumentError):
            load_report(path)
