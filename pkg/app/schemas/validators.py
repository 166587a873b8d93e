"""
自定义验证器模块

提供记录字段的校验与规范化
"""

import re

from pydantic import BaseModel, ConfigDict


class EnhancedBaseModel(BaseModel):
    """增强的基础模型：去除字符串首尾空格，实例不可变"""

    model_config = ConfigDict(
        str_strip_whitespace=True,  # 自动去除字符串前后空格
        frozen=True,
    )


_POSITION_PATTERN = re.compile(r"^(?:P_?)?(\d+)$", re.IGNORECASE)


def validate_event_code(code: str) -> str:
    """验证事件码"""
    if not code or not code.strip():
        raise ValueError("事件码不能为空")
    return code.strip()


def parse_position(text: str) -> int:
    """
    解析传感器位置编号

    接受 "P_3"、"P3" 与 "3" 三种写法
    """
    match = _POSITION_PATTERN.match(text.strip())
    if not match:
        raise ValueError(f"位置编号格式不正确: {text!r}")
    position = int(match.group(1))
    if position < 1:
        raise ValueError("位置编号从 1 开始")
    return position


def format_position(position: int) -> str:
    """位置编号的规范写法"""
    return f"P_{position}"


def validate_fraction(fraction: float) -> float:
    """验证选择比例"""
    if not (0.0 < fraction <= 1.0):
        raise ValueError("选择比例必须在 (0, 1] 内")
    return fraction
