"""
配置管理模块

使用 Pydantic Settings 管理运行配置。配置文件为扁平的 KEY=VALUE 文本（dotenv 格式），
优先级：命令行参数 > 环境变量 > 配置文件 > 默认值
"""

from datetime import date
from enum import StrEnum
from pathlib import Path
from typing import Any

from pydantic import Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.core.exceptions import UsageException
from app.schemas.records import Robot
from app.schemas.synth import FaultKind


class StdMode(StrEnum):
    """鲁棒评分使用的标准差口径"""

    SAMPLE = "sample"  # 除数 n-1
    POPULATION = "population"  # 除数 n


class TauVariant(StrEnum):
    """Kendall τ 变体"""

    B = "b"  # 带并列修正
    A = "a"


class Aggregation(StrEnum):
    """多个传感器位置上的 τ 聚合方式"""

    MAX = "max"
    MEAN = "mean"


class RedundancySource(StrEnum):
    """冗余剔除时计算 τ 的序列来源"""

    SCORES = "scores"
    COUNTS = "counts"


class EvalSpan(StrEnum):
    """评估时的评分区间"""

    UNTIL_REPLACEMENT = "until_replacement"
    FULL = "full"


class Settings(BaseSettings):
    """运行配置"""

    # 输入输出路径
    LOG_CSV: Path | None = None
    SENSOR_CSV: Path | None = None
    LABELS_CSV: Path | None = None
    SELECTION_JSON: Path | None = None  # detect 使用的选择结果，为空时使用全部事件
    OUTPUT_DIR: Path = Path("output")

    # 分析对象
    ROBOT: Robot = Robot.LOAD
    MACHINE: str | None = None  # 为空时取数据中第一台机器
    SPAN_START: date | None = None  # 覆盖数据集的起始日期
    SPAN_END: date | None = None
    NUM_POSITIONS: int | None = Field(default=None, ge=1)  # 传感器位置数 K，为空时不校验

    # 特征选择（FRACTION 与 TARGET_COUNT 的默认值即 20% 与 40 个特征）
    FRACTION: float = Field(default=0.20, gt=0.0, le=1.0)
    TARGET_COUNT: int = Field(default=40, ge=1)
    RHO: float = Field(default=0.8, gt=0.0, le=1.0)
    STD_MODE: StdMode = StdMode.SAMPLE
    TAU_VARIANT: TauVariant = TauVariant.B
    AGGREGATION: Aggregation = Aggregation.MAX
    REDUNDANCY_SOURCE: RedundancySource = RedundancySource.SCORES
    SELECTION_ENABLED: bool = True

    # 检测与评估
    KNN_K: int = Field(default=5, ge=1)
    WINDOW_DAYS: int = Field(default=14, ge=0)
    EVAL_SPAN: EvalSpan = EvalSpan.UNTIL_REPLACEMENT
    SENSOR_ARM: bool = False

    # 合成场景（synth 子命令），取值范围由 ScenarioSpec 校验
    SYNTH_MACHINES: int = 1
    SYNTH_DAYS: int = 120
    SYNTH_POSITIONS: int = 4
    SYNTH_CODES: int = 300
    SYNTH_RELEVANT: int = 10
    SYNTH_FAULT_KIND: FaultKind = FaultKind.GRADUAL
    SYNTH_FAULT_DAY: int = 100
    SYNTH_LEAD_DAYS: int = 10
    SYNTH_NOISE_RATE: float = 1.0

    # 运行时
    STRICT_INGEST: bool = False
    SEED: int = 0
    WORKERS: int = Field(default=1, ge=1)
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Path | None = None  # 可选的日志文件，按大小轮转

    model_config = SettingsConfigDict(
        case_sensitive=True,
        extra="ignore",  # 忽略未定义的额外键
    )

    @model_validator(mode="after")
    def check_span_override(self) -> "Settings":
        if self.SPAN_START and self.SPAN_END and self.SPAN_START > self.SPAN_END:
            raise ValueError("SPAN_START 不能晚于 SPAN_END")
        return self

    def to_manifest(self) -> dict[str, Any]:
        """导出为可写入运行清单的字典"""
        return self.model_dump(mode="json")


def load_settings(config_file: Path | None = None, **overrides: Any) -> Settings:
    """
    加载运行配置

    Args:
        config_file: 可选的 KEY=VALUE 配置文件
        **overrides: 命令行参数，值为 None 的项视为未指定

    Returns:
        Settings: 生效的配置

    Raises:
        UsageException: 配置文件不存在或字段校验失败
    """
    if config_file is not None and not config_file.is_file():
        raise UsageException(f"配置文件不存在: {config_file}")

    explicit = {key: value for key, value in overrides.items() if value is not None}
    try:
        return Settings(_env_file=config_file, **explicit)  # type: ignore[call-arg]
    except ValidationError as e:
        details = [
            {"field": ".".join(str(loc) for loc in error["loc"]), "message": error["msg"]} for error in e.errors()
        ]
        raise UsageException("配置参数验证失败", details={"validation_errors": details}) from e
