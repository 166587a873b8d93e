"""
测试辅助函数

构造记录、区间与 CSV 文件
"""

from datetime import date, datetime
from pathlib import Path

from app.schemas.records import DaySpan, LogRecord, Robot, SensorRecord

LOG_HEADER = "Machine,Code,Severity,Detail,DateTime\n"
SENSOR_HEADER = "Robot,Position,Value,DateTime\n"


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def log(machine: str, code: str, ts: str) -> LogRecord:
    return LogRecord(machine=machine, code=code, severity="Low", detail="", timestamp=datetime.fromisoformat(ts))


def sensor(robot: Robot, position: int, value: float, ts: str, machine: str | None = None) -> SensorRecord:
    return SensorRecord(
        robot=robot, position=position, value=value, timestamp=datetime.fromisoformat(ts), machine=machine
    )


def span(first: str, last: str) -> DaySpan:
    return DaySpan(first=date.fromisoformat(first), last=date.fromisoformat(last))
