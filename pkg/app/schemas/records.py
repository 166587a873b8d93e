"""
输入记录 Schema

事件日志行、传感器行以及二者组成的数据集
"""

from datetime import date, datetime, timedelta
from enum import StrEnum

from pydantic import Field, field_validator, model_validator

from app.schemas.validators import EnhancedBaseModel, validate_event_code


class Severity(StrEnum):
    """日志严重级别"""

    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"
    UNKNOWN = "Unknown"

    @classmethod
    def parse(cls, text: str) -> "Severity":
        """未知的级别字符串映射为 Unknown，记录保留"""
        for member in cls:
            if member.value.lower() == text.strip().lower():
                return member
        return cls.UNKNOWN


class Robot(StrEnum):
    """晶圆传输子系统中的机器人"""

    LOAD = "Load"
    UNLOAD = "Unload"


class LogRecord(EnhancedBaseModel):
    """事件日志中的一行"""

    machine: str = Field(..., description="机器标识")
    code: str = Field(..., min_length=1, description="事件码（日志事件的唯一标识）")
    severity: Severity = Field(default=Severity.UNKNOWN, description="严重级别")
    detail: str = Field(default="", description="描述文本，原样保留")
    timestamp: datetime = Field(..., description="触发时间（秒级）")

    @field_validator("code")
    @classmethod
    def validate_code_field(cls, v: str) -> str:
        return validate_event_code(v)

    @field_validator("severity", mode="before")
    @classmethod
    def normalize_severity(cls, v: object) -> object:
        if isinstance(v, str):
            return Severity.parse(v)
        return v

    @field_validator("timestamp")
    @classmethod
    def truncate_to_second(cls, v: datetime) -> datetime:
        return v.replace(microsecond=0)

    @property
    def day(self) -> date:
        return self.timestamp.date()


class SensorRecord(EnhancedBaseModel):
    """传感器数据中的一行"""

    robot: Robot = Field(..., description="机器人")
    position: int = Field(..., ge=1, description="位置编号 k")
    value: float = Field(..., description="测量值")
    timestamp: datetime = Field(..., description="测量时间（秒级）")
    machine: str | None = Field(default=None, description="机器标识，为空时适用于所有机器")

    @field_validator("timestamp")
    @classmethod
    def truncate_to_second(cls, v: datetime) -> datetime:
        return v.replace(microsecond=0)

    @property
    def day(self) -> date:
        return self.timestamp.date()


class DaySpan(EnhancedBaseModel):
    """闭区间日期范围"""

    first: date
    last: date

    @model_validator(mode="after")
    def check_order(self) -> "DaySpan":
        if self.first > self.last:
            raise ValueError(f"区间起点 {self.first} 晚于终点 {self.last}")
        return self

    def __len__(self) -> int:
        return (self.last - self.first).days + 1

    def __contains__(self, day: object) -> bool:
        return isinstance(day, date) and self.first <= day <= self.last

    def days(self) -> list[date]:
        """区间内的全部日期"""
        return [self.first + timedelta(days=i) for i in range(len(self))]

    def index(self, day: date) -> int:
        """日期在区间内的下标"""
        return (day - self.first).days

    def __str__(self) -> str:
        return f"{self.first}..{self.last}"


class Dataset(EnhancedBaseModel):
    """事件日志与传感器数据"""

    logs: list[LogRecord] = Field(default_factory=list)
    sensors: list[SensorRecord] = Field(default_factory=list)
    machines: list[str] = Field(default_factory=list, description="日志中出现的机器（排序）")
    span: DaySpan

    @model_validator(mode="after")
    def check_records_within_span(self) -> "Dataset":
        for record in (*self.logs, *self.sensors):
            if record.day not in self.span:
                raise ValueError(f"记录日期 {record.day} 不在区间 {self.span} 内")
        return self

    def message_count(self, machine: str) -> int:
        """指定机器的日志条数"""
        return sum(1 for record in self.logs if record.machine == machine)
