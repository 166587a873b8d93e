"""
合成场景 Schema

场景参数与真值
"""

from datetime import date
from enum import StrEnum

from pydantic import Field, model_validator

from app.schemas.evaluation import FaultLabel
from app.schemas.validators import EnhancedBaseModel


class FaultKind(StrEnum):
    """故障形态"""

    GRADUAL = "Gradual"
    SUDDEN = "Sudden"
    MIXED = "Mixed"  # 偶数序号机器为渐变，奇数为突变


class ScenarioSpec(EnhancedBaseModel):
    """合成场景参数"""

    seed: int = 0
    n_machines: int = Field(default=1, ge=1)
    days: int = Field(default=120, ge=2)
    K: int = Field(default=4, ge=1, description="传感器位置数")
    n_codes: int = Field(default=300, ge=1)
    n_relevant: int = Field(default=10, ge=0)
    fault_kind: FaultKind = FaultKind.GRADUAL
    fault_day: int = Field(default=100, ge=0, description="更换日期相对起始日的偏移")
    lead_days: int = Field(default=10, ge=0, description="相关事件早于传感器偏离的天数")
    noise_rate: float = Field(default=1.0, ge=0.0, description="无关事件的日均触发次数")

    # 形态参数
    ramp_days: int = Field(default=20, ge=1, description="渐变故障从出现到更换的天数")
    sudden_days: int = Field(default=4, ge=1, description="突变故障偏离持续的天数")
    burst_rate: float = Field(default=6.0, gt=0.0, description="渐变故障末期相关事件的附加触发率")
    sudden_burst_rate: float = Field(default=15.0, gt=0.0, description="突变故障末期相关事件的附加触发率")
    burst_prob: float = Field(default=0.5, gt=0.0, le=1.0, description="渐变故障窗口内相关事件每日触发概率")
    sudden_burst_prob: float = Field(default=0.8, gt=0.0, le=1.0)
    sensor_sigma: float = Field(default=0.01, gt=0.0)
    sample_prob: float = Field(default=0.85, gt=0.0, le=1.0, description="每天有测量的概率")
    max_daily_samples: int = Field(default=4, ge=1)
    start_date: date = date(2020, 1, 1)

    @model_validator(mode="after")
    def check_invariants(self) -> "ScenarioSpec":
        if self.n_relevant > self.n_codes:
            raise ValueError("n_relevant 不能大于 n_codes")
        if self.fault_day >= self.days:
            raise ValueError("fault_day 必须小于 days")
        return self


class MachineTruth(EnhancedBaseModel):
    """单台机器的真值"""

    label: FaultLabel
    kind: FaultKind = Field(..., description="该机器的故障形态（Gradual 或 Sudden）")
    deviation_onset: date = Field(..., description="传感器开始偏离的日期")
    burst_start: date = Field(..., description="相关事件开始成簇触发的日期")


class GroundTruth(EnhancedBaseModel):
    """合成数据的真值"""

    relevant_codes: list[str] = Field(default_factory=list)
    machines: list[MachineTruth] = Field(default_factory=list)

    @property
    def labels(self) -> list[FaultLabel]:
        return [machine.label for machine in self.machines]
