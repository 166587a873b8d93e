"""
运行报告 Schema

命令结果与错误报告的统一信封、运行清单
"""

from typing import Any

from pydantic import BaseModel, Field


class BaseResponse[T](BaseModel):
    """所有命令结果与错误报告的基类"""

    success: bool
    code: int  # 状态码 (0=成功, 其他=错误码)
    msg: str  # 用户友好的消息
    data: T | None = None
    err: T | None = None


class RunManifest(BaseModel):
    """运行清单：足以复现一次运行"""

    command: str = Field(..., description="子命令名称")
    settings: dict[str, Any] = Field(default_factory=dict, description="生效的配置")
    inputs: dict[str, str] = Field(default_factory=dict, description="输入文件的 SHA-256 摘要")
    outputs: list[str] = Field(default_factory=list, description="输出文件名（相对输出目录）")
