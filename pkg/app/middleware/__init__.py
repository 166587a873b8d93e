"""
中间件模块

包含阶段日志与日志配置
"""

from app.middleware.logging import log_stage, setup_logging

__all__ = ["log_stage", "setup_logging"]
