"""
评估 Schema

故障标签、检测判定与对比表
"""

from datetime import date

from pydantic import Field

from app.schemas.records import Robot
from app.schemas.validators import EnhancedBaseModel


class FaultLabel(EnhancedBaseModel):
    """一台机器的故障标签（故障发生在更换日期当天或之前）"""

    machine: str
    robot: Robot
    fault_kind: str = Field(..., description="故障类型标签，如 GF_1、SF_1")
    replacement_date: date


class EvalOutcome(EnhancedBaseModel):
    """检测判定"""

    machine: str
    detected: bool
    top_day: date
    replacement_date: date
    lead_days: int = Field(..., description="更换日期 - top_day")


class ArmResult(EnhancedBaseModel):
    """对比表中的一个分支"""

    feature_count: int
    outcome: EvalOutcome


class ComparisonRow(EnhancedBaseModel):
    """对比表中的一行（一台机器）"""

    machine: str
    robot: Robot
    fault_kind: str
    replacement_date: date
    messages: int = 0
    raw: ArmResult | None = None
    selected: ArmResult | None = None
    sensor: ArmResult | None = None
    error: str | None = Field(default=None, description="该机器失败时的错误信息")


class ComparisonTable(EnhancedBaseModel):
    """全部机器的对比结果与汇总"""

    rows: list[ComparisonRow] = Field(default_factory=list)

    def detected_count(self, arm: str) -> int:
        """某个分支的检出数"""
        count = 0
        for row in self.rows:
            result: ArmResult | None = getattr(row, arm)
            if result is not None and result.outcome.detected:
                count += 1
        return count

    @property
    def total(self) -> int:
        return len(self.rows)
