"""
原子文件写入

先写入同目录临时文件再 os.replace，读者永远看不到半写文件。
"""
import logging
import os
import tempfile
from pathlib import Path
from typing import Union

from core.exceptions import ReportIOError

logger = logging.getLogger(__name__)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """
    原子写入文本文件

    Raises:
        ReportIOError: 目录不可写或写入失败
    """
    path = Path(path)
    tmp_name = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            "w",
            encoding="utf-8",
            newline="",
            dir=path.parent,
            prefix=f".{path.name}.",
            suffix=".tmp",
            delete=False,
        ) as tmp:
            tmp_name = tmp.name
            tmp.write(text)
        os.replace(tmp_name, path)
    except OSError as exc:
        if tmp_name and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise ReportIOError(f"Cannot write {path}: {exc}", cause=exc) from exc
    logger.debug("写入文件: %s", path)
    return path
