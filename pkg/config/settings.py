"""
全局配置模块
"""
from pathlib import Path
from typing import List, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """系统全局配置"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # 项目路径
    PROJECT_ROOT: Path = Path(__file__).parent.parent

    # 环境
    ENV: str = Field(default="development", description="运行环境")
    DEBUG: bool = Field(default=False, description="调试模式")

    # 仿真配置
    DEFAULT_SEED: int = Field(default=0, ge=0, description="未显式指定时使用的随机种子")
    THREADS: int = Field(default=1, ge=1, description="蒙特卡洛试验并行线程数")
    OUTPUT_DIR: Path = Field(
        default=Path(__file__).parent.parent / "outputs",
        description="数据集、模型与报告的默认输出目录",
    )
    EXPERIMENTS_PATH: Path = Field(
        default=Path(__file__).parent.parent / "experiments",
        description="实验 manifest 根目录",
    )

    # 模板/Jinja 配置
    TEMPLATE_ROOT: Path = Field(
        default=Path(__file__).parent.parent / "harness" / "templates",
        description="报告模板根目录",
    )
    JINJA_AUTO_RELOAD: bool = Field(default=False, description="开发模式下自动重载模板")
    JINJA_CACHE_SIZE: int = Field(default=50, description="Jinja 模板缓存大小")

    # API 配置
    API_HOST: str = Field(default="0.0.0.0", description="API 主机")
    API_PORT: int = Field(default=8000, description="API 端口")
    CORS_ALLOW_ORIGINS: List[str] = Field(default=["*"], description="CORS 允许来源")
    API_MAX_TRIALS: int = Field(default=50, ge=1, description="单次 API 实验允许的最大试验数")
    API_MAX_PATTERNS: int = Field(
        default=20000, ge=2, description="单次 API 请求允许的最大反射图样数 L"
    )

    # 日志配置
    LOG_LEVEL: str = Field(default="INFO", description="日志级别")
    LOG_FORMAT: str = Field(default="text", description="日志格式: text, json")
    LOG_FILE: Optional[Path] = Field(default=None, description="日志文件路径")


# 全局配置实例
settings = Settings()
