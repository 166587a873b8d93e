"""
日志中间件

记录每个流水线阶段的开始、耗时与异常，并配置 loguru
"""

import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

from loguru import logger


@contextmanager
def log_stage(name: str, **context: Any) -> Iterator[None]:
    """
    包裹一个流水线阶段并记录日志

    Args:
        name: 阶段名称
        **context: 附加在日志中的上下文（如机器、机器人）

    Example:
        >>> with log_stage("vectorize", machine="1"):
        ...     pass
    """
    start_time = time.perf_counter()
    suffix = " ".join(f"{key}={value}" for key, value in context.items())

    logger.info(f"📨 {name} 开始 {suffix}".rstrip())
    try:
        yield
    except Exception as e:
        process_time = time.perf_counter() - start_time
        logger.exception(f"❌ {name} 失败 {suffix} - Error: {e} - Time: {process_time:.3f}s")
        # 重新抛出，交给命令层统一转换为错误报告
        raise
    process_time = time.perf_counter() - start_time
    logger.info(f"✅ {name} 完成 {suffix} - Time: {process_time:.3f}s")


def setup_logging(level: str = "INFO", log_file: Path | None = None) -> None:
    """
    配置 loguru 日志

    控制台输出到 stderr，标准输出留给命令结果；可选的文件输出按大小轮转
    """
    # 移除默认的 handler
    logger.remove()

    # 添加控制台输出（带颜色）
    logger.add(
        sink=sys.stderr,
        format=(
            "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
            "<level>{message}</level>"
        ),
        level=level,
        colorize=True,
    )

    if log_file is not None:
        logger.add(
            log_file,
            rotation="100 MB",  # 文件大小达到 100MB 时轮转
            retention="30 days",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} | {message}",
            level=level,
        )

    logger.debug("日志系统初始化完成")
