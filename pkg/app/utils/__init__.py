"""
工具函数模块

提供日期解析与文件读写等辅助功能
"""

from app.utils.datetime import format_day, format_timestamp, parse_day
from app.utils.io import file_digest, write_csv, write_json

__all__ = [
    "format_timestamp",
    "parse_day",
    "format_day",
    "write_csv",
    "write_json",
    "file_digest",
]
