"""
实验报告：数据模型、CSV/JSON/Markdown 输出与 JSON 读取
"""
import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Union

import pandas as pd
from jinja2 import Environment, FileSystemLoader
from pydantic import BaseModel, Field, ValidationError

from config.settings import settings
from core.exceptions import InvalidArgumentError, ReportIOError
from core.io import atomic_write_text

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["L", "method", "metric", "mean", "stderr", "trials"]
REPORT_FILES = {"csv": "report.csv", "json": "report.json", "markdown": "report.md"}


class TrialValue(BaseModel):
    """单次试验、单个 (L, 方案) 的线性域指标；flag 非空表示该格被标记"""

    trial: int
    L: int
    method: str
    metric: Literal["nmse", "snr"]
    value: Optional[float] = None
    flag: Optional[str] = None


class CellStats(BaseModel):
    """(L, 方案, 指标) 汇总"""

    L: int
    method: str
    metric: Literal["nmse", "snr_db"]
    mean: Optional[float] = None
    stderr: Optional[float] = Field(default=None, ge=0)
    trials: int = Field(default=0, ge=0, description="参与汇总的样本数")
    flagged: int = Field(default=0, ge=0)


class Provenance(BaseModel):
    name: str
    config_hash: str
    seed: int
    timestamp: str
    trials: int
    l_grid: List[int]
    methods: List[str]
    pairing: str = "one channel realization per trial, shared by all L and methods"


class ExperimentReport(BaseModel):
    provenance: Provenance
    cells: List[CellStats]
    samples: List[TrialValue] = Field(default_factory=list)

    def cell(self, l_value: int, method: str, metric: str) -> CellStats:
        for cell in self.cells:
            if cell.L == l_value and cell.method == method and cell.metric == metric:
                return cell
        raise KeyError((l_value, method, metric))

    def values(self, l_value: int, method: str, metric: str) -> List[Optional[float]]:
        """按试验编号排序的逐试验线性值（被标记的为 None）"""
        picked = [
            s for s in self.samples if s.L == l_value and s.method == method and s.metric == metric
        ]
        return [s.value for s in sorted(picked, key=lambda s: s.trial)]

    @property
    def flagged_count(self) -> int:
        return sum(cell.flagged for cell in self.cells)


def finite_or_none(value: float) -> Optional[float]:
    return float(value) if value is not None and math.isfinite(value) else None


# ============================================================
# 渲染
# ============================================================

def _format_number(value: Optional[float], digits: int = 4) -> str:
    """数值格式化，缺失值显示为 n/a"""
    if value is None:
        return "n/a"
    return f"{value:.{digits}g}"


env = Environment(
    loader=FileSystemLoader(settings.TEMPLATE_ROOT),
    autoescape=False,
    trim_blocks=True,
    lstrip_blocks=True,
    auto_reload=settings.JINJA_AUTO_RELOAD,
    cache_size=settings.JINJA_CACHE_SIZE,
)
env.filters["num"] = _format_number


def report_to_frame(report: ExperimentReport) -> pd.DataFrame:
    rows = [cell.model_dump(include=set(CSV_COLUMNS)) for cell in report.cells]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def render_csv(report: ExperimentReport) -> str:
    return report_to_frame(report).to_csv(index=False, float_format="%.12g", lineterminator="\n")


def render_json(report: ExperimentReport) -> str:
    return json.dumps(report.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"


def render_markdown(report: ExperimentReport) -> str:
    metrics: Dict[str, List[CellStats]] = {}
    for cell in report.cells:
        metrics.setdefault(cell.metric, []).append(cell)
    template = env.get_template("report.md.j2")
    return template.render(
        provenance=report.provenance,
        metrics=metrics,
        flagged=report.flagged_count,
    )


_RENDERERS = {"csv": render_csv, "json": render_json, "markdown": render_markdown}


def emit_report(
    report: ExperimentReport,
    formats: Optional[Sequence[str]] = None,
    output_dir: Optional[Union[str, Path]] = None,
) -> Dict[str, Path]:
    """
    写出报告文件（原子写入）

    Args:
        report: 完整报告
        formats: csv / json / markdown，缺省 csv + json
        output_dir: 输出目录，缺省 OUTPUT_DIR/<实验名>

    Returns:
        格式 -> 文件路径

    Raises:
        ReportIOError: 路径不可写
    """
    formats = list(formats or ["csv", "json"])
    unknown = [f for f in formats if f not in _RENDERERS]
    if unknown:
        raise InvalidArgumentError(f"unknown report format(s): {', '.join(unknown)}")
    out_dir = Path(output_dir) if output_dir else settings.OUTPUT_DIR / report.provenance.name

    written: Dict[str, Path] = {}
    for fmt in formats:
        written[fmt] = atomic_write_text(out_dir / REPORT_FILES[fmt], _RENDERERS[fmt](report))
    logger.info(
        "报告已写出: %s -> %s",
        ", ".join(formats),
        out_dir,
        extra={"extra_data": {"files": {k: str(v) for k, v in written.items()}}},
    )
    return written


def load_report(path: Union[str, Path]) -> ExperimentReport:
    """读取 JSON 报告"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"Cannot read {path}: {exc}", cause=exc) from exc
    try:
        return ExperimentReport.model_validate_json(text)
    except ValidationError as exc:
        raise InvalidArgumentError(f"malformed report {path}: {exc}", cause=exc) from exc
