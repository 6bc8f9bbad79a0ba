"""
实验注册中心

扫描 experiments/*/manifest.yaml 自动注册，新增实验只需放置 manifest。
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml  # type: ignore[import-untyped]

from config.settings import settings
from core.exceptions import ConfigError
from harness.spec import ExperimentSpec, parse_experiment_spec

logger = logging.getLogger(__name__)


@dataclass
class ExperimentManifest:
    name: str
    manifest_path: Path
    version: str = "1.0"
    description: str = ""
    tags: List[str] = field(default_factory=list)
    spec_data: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_yaml(cls, manifest_path: Path, data: Dict[str, Any]) -> "ExperimentManifest":
        meta = data.get("manifest", {}) or {}
        spec_data = dict(data.get("experiment", {}) or {})
        name = meta.get("name") or spec_data.get("name") or manifest_path.parent.name
        spec_data.setdefault("name", name)
        return cls(
            name=name,
            manifest_path=manifest_path,
            version=str(meta.get("version", "1.0")),
            description=meta.get("description", spec_data.get("description", "")),
            tags=meta.get("tags", []),
            spec_data=spec_data,
        )

    def build_spec(self) -> ExperimentSpec:
        """解析为 ExperimentSpec（每次重新校验）"""
        return parse_experiment_spec(self.spec_data)

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "version": self.version,
            "description": self.description,
            "tags": list(self.tags),
        }


class ExperimentRegistry:
    """实验注册中心"""

    _experiments: Dict[str, ExperimentManifest] = {}

    @classmethod
    def register(cls, manifest: ExperimentManifest) -> None:
        cls._experiments[manifest.name] = manifest

    @classmethod
    def get(cls, name: str) -> Optional[ExperimentManifest]:
        return cls._experiments.get(name)

    @classmethod
    def list_all(cls) -> List[str]:
        return sorted(cls._experiments.keys())

    @classmethod
    def build_spec(cls, name: str) -> ExperimentSpec:
        """按名称取实验规格"""
        manifest = cls.get(name)
        if manifest is None:
            raise ConfigError(
                f"Unknown experiment '{name}', available: {', '.join(cls.list_all()) or 'none'}"
            )
        return manifest.build_spec()

    @classmethod
    def clear(cls) -> None:
        cls._experiments.clear()

    @classmethod
    def auto_register_from_manifests(cls, base_dir: Optional[Path] = None) -> int:
        """扫描目录下的 manifest.yaml 自动注册实验，返回注册数量"""
        root = Path(base_dir or settings.EXPERIMENTS_PATH)
        count = 0
        for manifest_path in sorted(root.glob("*/manifest.yaml")):
            try:
                with open(manifest_path, "r", encoding="utf-8") as f:
                    data = yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as exc:
                logger.warning("跳过无法读取的 manifest %s: %s", manifest_path, exc)
                continue
            manifest = ExperimentManifest.from_yaml(manifest_path, data)
            if manifest.name:
                cls.register(manifest)
                count += 1
        logger.debug("从 %s 注册实验 %d 个", root, count)
        return count


# 自动注册 manifest 中的实验
ExperimentRegistry.auto_register_from_manifests()
