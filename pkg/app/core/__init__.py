"""
核心模块

包含配置管理与异常定义
"""

from app.core.config import Settings, load_settings
from app.core.exceptions import AppException, DataException, UsageException, create_error_report

__all__ = [
    "Settings",
    "load_settings",
    "AppException",
    "DataException",
    "UsageException",
    "create_error_report",
]
