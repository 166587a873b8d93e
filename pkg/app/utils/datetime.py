"""
日期时间工具函数

输入表中的时间戳均为无时区的本地时间，格式固定为 YYYY-MM-DD HH:MM:SS
"""

from datetime import date, datetime

TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"
DATE_FORMAT = "%Y-%m-%d"


def format_timestamp(value: datetime) -> str:
    return value.strftime(TIMESTAMP_FORMAT)


def parse_day(text: str) -> date:
    """
    解析 YYYY-MM-DD 日期

    Raises:
        ValueError: 格式不符

    Example:
        >>> parse_day("2020-01-21")
        datetime.date(2020, 1, 21)
    """
    return datetime.strptime(text.strip(), DATE_FORMAT).date()


def format_day(value: date) -> str:
    return value.strftime(DATE_FORMAT)
