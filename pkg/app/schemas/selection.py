"""
特征选择 Schema

相关性报告、冗余剔除决策与选择结果
"""

from enum import StrEnum

from pydantic import Field, model_validator

from app.schemas.validators import EnhancedBaseModel


class RelevanceEntry(EnhancedBaseModel):
    """单个事件码的相关性"""

    code: str
    taus: list[float] = Field(..., description="与每个传感器位置的 τ")
    aggregate: float = Field(..., ge=-1.0, le=1.0, description="跨位置聚合后的 τ")

    @model_validator(mode="after")
    def check_taus(self) -> "RelevanceEntry":
        if any(not (-1.0 <= tau <= 1.0) for tau in self.taus):
            raise ValueError("τ 必须在 [-1, 1] 内")
        return self


class RelevanceReport(EnhancedBaseModel):
    """按聚合 τ 降序排列的相关性报告（并列时按事件码字典序）"""

    positions: list[int] = Field(default_factory=list, description="传感器位置编号，对应 taus 的顺序")
    entries: list[RelevanceEntry] = Field(default_factory=list)

    @property
    def codes(self) -> list[str]:
        return [entry.code for entry in self.entries]


class SelectionStage(StrEnum):
    """选择阶段"""

    RELEVANCE = "Relevance"
    REDUNDANCY = "Redundancy"


class RedundancyDecision(EnhancedBaseModel):
    """冗余剔除中单个事件码的去留"""

    code: str
    kept: bool
    reason: str = Field(..., description="kept / redundant / refilled / not_reached")
    max_abs_tau: float | None = Field(default=None, description="与已保留事件码的最大 |τ|")
    against: str | None = Field(default=None, description="取得最大 |τ| 的已保留事件码")


class SelectionResult(EnhancedBaseModel):
    """选择结果"""

    selected: list[str] = Field(default_factory=list, description="按相关性排序的事件码")
    threshold_used: float = Field(..., description="相关性阶段为比例，冗余阶段为 rho")
    stage: SelectionStage
    decisions: list[RedundancyDecision] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_unique(self) -> "SelectionResult":
        if len(set(self.selected)) != len(self.selected):
            raise ValueError("选择结果中存在重复的事件码")
        return self
