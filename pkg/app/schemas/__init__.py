"""
Pydantic Schema 模块

流水线各阶段之间传递的数据类型
"""

from app.schemas.detection import AnomalyResult, EventCountMatrix
from app.schemas.evaluation import ArmResult, ComparisonRow, ComparisonTable, EvalOutcome, FaultLabel
from app.schemas.records import Dataset, DaySpan, LogRecord, Robot, SensorRecord, Severity
from app.schemas.report import BaseResponse, RunManifest
from app.schemas.selection import (
    RedundancyDecision,
    RelevanceEntry,
    RelevanceReport,
    SelectionResult,
    SelectionStage,
)
from app.schemas.series import EventSeries, RawScoreSeries, ScoreSeries, SensorSeries
from app.schemas.synth import FaultKind, GroundTruth, MachineTruth, ScenarioSpec

__all__ = [
    "LogRecord",
    "SensorRecord",
    "Severity",
    "Robot",
    "DaySpan",
    "Dataset",
    "EventSeries",
    "SensorSeries",
    "RawScoreSeries",
    "ScoreSeries",
    "RelevanceEntry",
    "RelevanceReport",
    "RedundancyDecision",
    "SelectionResult",
    "SelectionStage",
    "EventCountMatrix",
    "AnomalyResult",
    "FaultLabel",
    "EvalOutcome",
    "ArmResult",
    "ComparisonRow",
    "ComparisonTable",
    "FaultKind",
    "ScenarioSpec",
    "MachineTruth",
    "GroundTruth",
    "BaseResponse",
    "RunManifest",
]
