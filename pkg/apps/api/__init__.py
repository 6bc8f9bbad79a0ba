"""
API 模块
"""
from apps.api.main import app

__all__ = ["app"]
