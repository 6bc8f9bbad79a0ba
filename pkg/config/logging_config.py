"""
日志配置

两种输出格式：
- text: 交互运行，`extra_data` 中的试验上下文以 key=value 追加在消息后
- json: 批量实验，每行一个 JSON 对象，便于按 trial / L / method 过滤

日志统一写 stderr，stdout 只留给 CLI 的 JSON 结果。
"""
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

from config.settings import settings

# 服务端依赖的访问日志过于频繁
_QUIET_LOGGERS = ("httpx", "httpcore", "uvicorn.access")


def _context(record: logging.LogRecord) -> Dict[str, Any]:
    data = getattr(record, "extra_data", None)
    return dict(data) if isinstance(data, dict) else {}


class JSONFormatter(logging.Formatter):
    """每条记录一个 JSON 对象，试验上下文平铺到顶层"""

    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc)
            .isoformat(timespec="milliseconds")
            .replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "thread": record.threadName,
        }
        payload.update(_context(record))
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False, default=str)


class TextFormatter(logging.Formatter):
    """时间 | 级别 | 模块 | 消息 [key=value ...]"""

    def __init__(self) -> None:
        super().__init__(
            fmt="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
            datefmt="%H:%M:%S",
        )

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        context = _context(record)
        if context:
            text += " [" + " ".join(f"{k}={v}" for k, v in context.items()) + "]"
        return text


def setup_logging(
    level: Optional[str] = None,
    format_type: Optional[str] = None,
    log_file: Optional[Union[str, Path]] = None,
) -> None:
    """
    配置根日志（重复调用会替换已有处理器）

    Args:
        level: DEBUG / INFO / WARNING / ERROR，缺省取 settings.LOG_LEVEL
        format_type: text / json，缺省取 settings.LOG_FORMAT
        log_file: 额外写入的日志文件，缺省取 settings.LOG_FILE
    """
    log_level = getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.INFO)
    formatter: logging.Formatter = (
        JSONFormatter() if (format_type or settings.LOG_FORMAT) == "json" else TextFormatter()
    )

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    file_path = log_file or settings.LOG_FILE
    if file_path:
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(str(file_path), encoding="utf-8"))

    root = logging.getLogger()
    root.setLevel(log_level)
    root.handlers.clear()
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)

    # numpy 的 RuntimeWarning（如训练中的溢出）进入同一日志流
    logging.captureWarnings(True)

    for name in _QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)
