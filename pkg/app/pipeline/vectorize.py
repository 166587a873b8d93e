"""
日志事件向量化模块

把日志记录按天计数，得到每个 (机器, 事件码) 的稠密逐日序列；
把传感器记录按 (机器人, 位置) 分组为不规则序列
"""

from collections import Counter, defaultdict
from pathlib import Path

import pandas as pd
from loguru import logger

from app.core.exceptions import NoRecordsForMachineError, NoSensorDataError
from app.schemas.records import Dataset, DaySpan, LogRecord, Robot, SensorRecord
from app.schemas.series import EventSeries, SensorSeries
from app.utils.datetime import format_day
from app.utils.io import write_csv


def vectorize_events(dataset: Dataset, machine: str, span: DaySpan | None = None) -> list[EventSeries]:
    """
    按天统计事件触发次数

    每一天用当天零点表示，区间内没有触发的日期补 0。
    只输出在区间内至少触发过一次的事件码，按事件码字典序排列

    Args:
        dataset: 数据集
        machine: 机器标识
        span: 分析区间，默认取数据集区间

    Returns:
        list[EventSeries]: 每个事件码一条序列

    Raises:
        NoRecordsForMachineError: 该机器在区间内没有日志
    """
    span = span or dataset.span
    counts: dict[str, Counter] = defaultdict(Counter)
    for record in dataset.logs:
        if record.machine == machine and record.day in span:
            counts[record.code][record.day] += 1

    if not counts:
        raise NoRecordsForMachineError(machine)

    days = span.days()
    series = [
        EventSeries(machine=machine, code=code, span=span, counts=[per_day[day] for day in days])
        for code, per_day in sorted(counts.items())
    ]
    logger.debug(f"Vectorized {len(series)} event codes for machine {machine} over {len(span)} days")
    return series


def group_sensors(dataset: Dataset, robot: Robot, machine: str | None = None) -> list[SensorSeries]:
    """
    按位置分组传感器记录

    每个位置一条序列，按时间戳稳定排序（同一秒的多条测量保留输入顺序）。
    指定 machine 时只保留该机器的记录以及未标注机器的记录

    Raises:
        NoSensorDataError: 该机器人没有传感器数据
    """
    grouped: dict[int, list[SensorRecord]] = defaultdict(list)
    for record in dataset.sensors:
        if record.robot != robot:
            continue
        if machine is not None and record.machine not in (None, machine):
            continue
        grouped[record.position].append(record)

    if not grouped:
        raise NoSensorDataError(robot.value, machine)

    series = []
    for position, records in sorted(grouped.items()):
        records = sorted(records, key=lambda record: record.timestamp)
        series.append(
            SensorSeries(
                robot=robot,
                position=position,
                machine=machine,
                timestamps=[record.timestamp for record in records],
                values=[record.value for record in records],
            )
        )
    return series


def filter_logs(dataset: Dataset, codes: list[str], machine: str | None = None) -> list[LogRecord]:
    """只保留选中事件码的日志记录（可限定机器），保持原顺序"""
    wanted = set(codes)
    return [
        record
        for record in dataset.logs
        if record.code in wanted and (machine is None or record.machine == machine)
    ]


def event_series_frame(series: list[EventSeries]) -> pd.DataFrame:
    """长表：machine, code, day, count"""
    rows = [
        (item.machine, item.code, format_day(day), count) for item in series for day, count in item.points()
    ]
    return pd.DataFrame(rows, columns=["machine", "code", "day", "count"])


def write_event_series_csv(series: list[EventSeries], path: Path) -> Path:
    return write_csv(event_series_frame(series), path)
