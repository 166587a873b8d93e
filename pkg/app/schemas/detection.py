"""
检测相关 Schema

事件计数矩阵与 KNN 异常结果
"""

from datetime import date

import numpy as np
from pydantic import Field, model_validator

from app.schemas.validators import EnhancedBaseModel


class EventCountMatrix(EnhancedBaseModel):
    """事件计数矩阵：行为日期，列为事件码"""

    days: list[date]
    codes: list[str]
    values: list[list[int]] = Field(..., description="|days| × |codes| 的非负整数矩阵")

    @model_validator(mode="after")
    def check_shape(self) -> "EventCountMatrix":
        if len(self.values) != len(self.days):
            raise ValueError("矩阵行数与日期数不一致")
        for row in self.values:
            if len(row) != len(self.codes):
                raise ValueError("矩阵列数与事件码数不一致")
            if any(value < 0 for value in row):
                raise ValueError("计数不能为负")
        return self

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.days), len(self.codes)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float).reshape(self.shape)


class AnomalyResult(EnhancedBaseModel):
    """逐日异常分数与得分最高的日期"""

    days: list[date]
    scores: list[float]
    top_day: date

    @model_validator(mode="after")
    def check_scores(self) -> "AnomalyResult":
        if len(self.days) != len(self.scores) or not self.days:
            raise ValueError("日期与分数长度不一致或为空")
        if any(score < 0 for score in self.scores):
            raise ValueError("异常分数不能为负")
        if self.scores[self.days.index(self.top_day)] != max(self.scores):
            raise ValueError("top_day 的分数必须为最大值")
        return self
