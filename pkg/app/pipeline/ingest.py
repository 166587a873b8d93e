"""
输入读取模块

读取、校验并规范化事件日志、传感器数据与故障标签三张 CSV 表
"""

import math
from pathlib import Path

import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field

from app.core.exceptions import (
    AppException,
    BadTimestampError,
    BadValueError,
    DataException,
    EmptyDatasetError,
    EmptyFileError,
    MissingColumnError,
    MissingInputError,
    PositionOutOfRangeError,
)
from app.schemas.evaluation import FaultLabel
from app.schemas.records import Dataset, DaySpan, LogRecord, Robot, SensorRecord, Severity
from app.schemas.validators import format_position, parse_position
from app.utils.datetime import TIMESTAMP_FORMAT, format_day, format_timestamp, parse_day
from app.utils.io import write_csv


class LogSchema(BaseModel):
    """事件日志的列名映射"""

    machine: str = "Machine"
    code: str = "Code"
    severity: str = "Severity"
    detail: str = "Detail"
    timestamp: str = "DateTime"


class SensorSchema(BaseModel):
    """传感器数据的列名映射，machine 列可选"""

    robot: str = "Robot"
    position: str = "Position"
    value: str = "Value"
    timestamp: str = "DateTime"
    machine: str = "Machine"


class RowError(BaseModel):
    """一行数据的错误"""

    row: int = Field(..., description="数据行号（不含表头，从 1 开始）")
    code: int
    message: str


class IngestResult[T](BaseModel):
    """读取结果：有效记录与逐行错误报告"""

    records: list[T] = Field(default_factory=list)
    errors: list[RowError] = Field(default_factory=list)


def _read_frame(path: Path, required: list[str]) -> pd.DataFrame:
    """读取为全字符串的 DataFrame 并检查表头"""
    if not path.is_file():
        raise MissingInputError(path.name, path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise EmptyFileError(path) from e

    for column in required:
        if column not in frame.columns:
            raise MissingColumnError(column, path)
    return frame


def _parse_timestamps(column: pd.Series) -> list:
    """按固定格式批量解析时间戳，无法解析的位置为 None"""
    parsed = pd.to_datetime(column.str.strip(), format=TIMESTAMP_FORMAT, errors="coerce")
    return [None if pd.isna(value) else value.to_pydatetime() for value in parsed]


def _record_error(errors: list[RowError], exc: AppException, row: int, strict: bool) -> None:
    if strict:
        raise exc
    errors.append(RowError(row=row, code=exc.code, message=exc.message))


def read_log_csv(path: Path, schema: LogSchema | None = None, strict: bool = False) -> IngestResult[LogRecord]:
    """
    读取事件日志

    Args:
        path: CSV 文件路径
        schema: 列名映射，默认 Machine/Code/Severity/Detail/DateTime
        strict: 为 True 时第一处错误即抛出异常

    Returns:
        IngestResult: 按文件顺序的记录与错误报告

    Raises:
        MissingColumnError: 表头缺少映射的列
        EmptyFileError: 文件为空
    """
    schema = schema or LogSchema()
    frame = _read_frame(path, [schema.machine, schema.code, schema.severity, schema.detail, schema.timestamp])
    timestamps = _parse_timestamps(frame[schema.timestamp])

    result = IngestResult[LogRecord]()
    columns = zip(
        frame[schema.machine].tolist(),
        frame[schema.code].tolist(),
        frame[schema.severity].tolist(),
        frame[schema.detail].tolist(),
        frame[schema.timestamp].tolist(),
        timestamps,
        strict=True,
    )
    for row, (machine, code, severity, detail, raw_ts, ts) in enumerate(columns, start=1):
        if ts is None:
            _record_error(result.errors, BadTimestampError(row, raw_ts), row, strict)
            continue
        if not code.strip():
            _record_error(result.errors, BadValueError(row, code), row, strict)
            continue
        result.records.append(
            LogRecord(machine=machine, code=code, severity=Severity.parse(severity), detail=detail, timestamp=ts)
        )

    if result.errors:
        logger.warning(f"⚠️  {path.name}: {len(result.errors)} 行无法解析")
    logger.debug(f"Read {len(result.records)} log records from {path}")
    return result


def read_sensor_csv(
    path: Path,
    schema: SensorSchema | None = None,
    num_positions: int | None = None,
    strict: bool = False,
) -> IngestResult[SensorRecord]:
    """
    读取传感器数据

    Args:
        path: CSV 文件路径
        schema: 列名映射，默认 Robot/Position/Value/DateTime，Machine 列可选
        num_positions: 声明的位置数 K，为空时不校验上界
        strict: 为 True 时第一处错误即抛出异常

    Returns:
        IngestResult: 按文件顺序的记录与错误报告
    """
    schema = schema or SensorSchema()
    frame = _read_frame(path, [schema.robot, schema.position, schema.value, schema.timestamp])
    timestamps = _parse_timestamps(frame[schema.timestamp])
    machines = frame[schema.machine].tolist() if schema.machine in frame.columns else [""] * len(frame)

    result = IngestResult[SensorRecord]()
    columns = zip(
        frame[schema.robot].tolist(),
        frame[schema.position].tolist(),
        frame[schema.value].tolist(),
        frame[schema.timestamp].tolist(),
        timestamps,
        machines,
        strict=True,
    )
    robots = {robot.value.lower(): robot for robot in Robot}
    for row, (robot_text, position_text, value_text, raw_ts, ts, machine) in enumerate(columns, start=1):
        error: DataException | None = None
        robot = robots.get(robot_text.strip().lower())
        try:
            position = parse_position(position_text)
        except ValueError:
            position = None
        try:
            value = float(value_text)
        except ValueError:
            value = math.nan

        if robot is None:
            error = BadValueError(row, robot_text)
        elif position is None:
            error = BadValueError(row, position_text)
        elif num_positions is not None and position > num_positions:
            error = PositionOutOfRangeError(row, position, num_positions)
        elif not math.isfinite(value):
            error = BadValueError(row, value_text)
        elif ts is None:
            error = BadTimestampError(row, raw_ts)

        if error is not None:
            _record_error(result.errors, error, row, strict)
            continue
        result.records.append(
            SensorRecord(robot=robot, position=position, value=value, timestamp=ts, machine=machine.strip() or None)
        )

    if result.errors:
        logger.warning(f"⚠️  {path.name}: {len(result.errors)} 行无法解析")
    logger.debug(f"Read {len(result.records)} sensor records from {path}")
    return result


def build_dataset(logs: list[LogRecord], sensors: list[SensorRecord]) -> Dataset:
    """
    组装数据集

    区间取两张表的最早与最晚日期，机器集合取自日志

    Raises:
        EmptyDatasetError: 两张表均无记录
    """
    if not logs and not sensors:
        raise EmptyDatasetError()

    days = [record.day for record in logs] + [record.day for record in sensors]
    return Dataset(
        logs=logs,
        sensors=sensors,
        machines=sorted({record.machine for record in logs}),
        span=DaySpan(first=min(days), last=max(days)),
    )


def read_labels_csv(path: Path) -> list[FaultLabel]:
    """
    读取故障标签（machine, robot, fault_kind, replacement_date）

    标签表很小，任何一行出错都直接抛出
    """
    frame = _read_frame(path, ["machine", "robot", "fault_kind", "replacement_date"])
    robots = {robot.value.lower(): robot for robot in Robot}
    labels = []
    for row, record in enumerate(frame.to_dict("records"), start=1):
        robot = robots.get(record["robot"].strip().lower())
        if robot is None:
            raise BadValueError(row, record["robot"])
        try:
            replacement = parse_day(record["replacement_date"])
        except ValueError as e:
            raise BadTimestampError(row, record["replacement_date"]) from e
        labels.append(
            FaultLabel(
                machine=record["machine"].strip(),
                robot=robot,
                fault_kind=record["fault_kind"].strip(),
                replacement_date=replacement,
            )
        )
    return labels


# ==================== 写出（与读取格式一致） ====================


def write_log_csv(records: list[LogRecord], path: Path, schema: LogSchema | None = None) -> Path:
    """写出事件日志，重新读取得到逐字段相同的记录"""
    schema = schema or LogSchema()
    frame = pd.DataFrame(
        {
            schema.machine: [record.machine for record in records],
            schema.code: [record.code for record in records],
            schema.severity: [record.severity.value for record in records],
            schema.detail: [record.detail for record in records],
            schema.timestamp: [format_timestamp(record.timestamp) for record in records],
        },
        columns=[schema.machine, schema.code, schema.severity, schema.detail, schema.timestamp],
    )
    return write_csv(frame, path)


def write_sensor_csv(records: list[SensorRecord], path: Path, schema: SensorSchema | None = None) -> Path:
    """写出传感器数据；任一记录带机器标识时输出 Machine 列"""
    schema = schema or SensorSchema()
    data = {
        schema.robot: [record.robot.value for record in records],
        schema.position: [format_position(record.position) for record in records],
        # repr 保证浮点数往返无损
        schema.value: [repr(record.value) for record in records],
        schema.timestamp: [format_timestamp(record.timestamp) for record in records],
    }
    if any(record.machine is not None for record in records):
        data[schema.machine] = [record.machine or "" for record in records]
    return write_csv(pd.DataFrame(data, columns=list(data)), path)


def write_labels_csv(labels: list[FaultLabel], path: Path) -> Path:
    frame = pd.DataFrame(
        {
            "machine": [label.machine for label in labels],
            "robot": [label.robot.value for label in labels],
            "fault_kind": [label.fault_kind for label in labels],
            "replacement_date": [format_day(label.replacement_date) for label in labels],
        },
        columns=["machine", "robot", "fault_kind", "replacement_date"],
    )
    return write_csv(frame, path)
