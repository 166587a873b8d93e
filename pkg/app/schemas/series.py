"""
时间序列 Schema

事件计数序列、传感器序列以及两类异常分数序列
"""

from datetime import date, datetime

import numpy as np
from pydantic import Field, model_validator

from app.schemas.records import DaySpan, Robot
from app.schemas.validators import EnhancedBaseModel


class EventSeries(EnhancedBaseModel):
    """某台机器上某个事件码的逐日触发次数（稠密，无触发的日期计 0）"""

    machine: str
    code: str
    span: DaySpan
    counts: list[int] = Field(..., description="与 span 逐日对应的触发次数")

    @model_validator(mode="after")
    def check_dense(self) -> "EventSeries":
        if len(self.counts) != len(self.span):
            raise ValueError(f"计数长度 {len(self.counts)} 与区间天数 {len(self.span)} 不一致")
        if any(count < 0 for count in self.counts):
            raise ValueError("计数不能为负")
        return self

    def points(self) -> list[tuple[date, int]]:
        """(日期, 次数) 对"""
        return list(zip(self.span.days(), self.counts, strict=True))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float)


class SensorSeries(EnhancedBaseModel):
    """某个机器人在位置 k 上的不规则采样序列"""

    robot: Robot
    position: int = Field(..., ge=1)
    machine: str | None = None
    timestamps: list[datetime]
    values: list[float]

    @model_validator(mode="after")
    def check_samples(self) -> "SensorSeries":
        if len(self.timestamps) != len(self.values):
            raise ValueError("时间戳与数值长度不一致")
        if any(later < earlier for earlier, later in zip(self.timestamps, self.timestamps[1:], strict=False)):
            raise ValueError("时间戳必须非递减")
        return self

    def __len__(self) -> int:
        return len(self.values)


class RawScoreSeries(EnhancedBaseModel):
    """不规则时间点上的异常分数，时间戳与源序列一致"""

    timestamps: list[datetime]
    scores: list[float]

    @model_validator(mode="after")
    def check_scores(self) -> "RawScoreSeries":
        if len(self.timestamps) != len(self.scores):
            raise ValueError("时间戳与分数长度不一致")
        if any(score < 0 for score in self.scores):
            raise ValueError("异常分数不能为负")
        return self


class ScoreSeries(EnhancedBaseModel):
    """按日对齐的异常分数，每天一个值"""

    span: DaySpan
    scores: list[float]

    @model_validator(mode="after")
    def check_scores(self) -> "ScoreSeries":
        if len(self.scores) != len(self.span):
            raise ValueError(f"分数长度 {len(self.scores)} 与区间天数 {len(self.span)} 不一致")
        if any(score < 0 for score in self.scores):
            raise ValueError("异常分数不能为负")
        return self

    def as_array(self) -> np.ndarray:
        return np.asarray(self.scores, dtype=float)
