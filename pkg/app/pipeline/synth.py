"""
合成数据生成模块

生成带有预埋故障与预埋相关事件的多机器数据集，用于基准测试与验收：

- 传感器：故障出现前为平稳噪声；渐变故障从出现到更换日期逐步增大漂移与抖动，
  突变故障在更换日期前几天注入阶跃
- 相关事件：从传感器偏离前 lead_days 天开始成簇触发，越接近更换日期触发越多，其余时间不触发
- 无关事件：每天按固定均值的泊松过程触发

给定 seed 时结果完全确定；每台机器的随机数种子由 (seed, 机器序号) 派生
"""

from datetime import date, datetime, time, timedelta
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger
from pydantic import ValidationError

from app.core.exceptions import BadSpecError
from app.pipeline.ingest import write_labels_csv, write_log_csv, write_sensor_csv
from app.schemas.evaluation import FaultLabel
from app.schemas.records import Dataset, DaySpan, LogRecord, Robot, SensorRecord, Severity
from app.schemas.synth import FaultKind, GroundTruth, MachineTruth, ScenarioSpec
from app.utils.io import write_json

SECONDS_PER_DAY = 86_400

# 故障形态（以 sensor_sigma 为单位）
DRIFT_SIGMAS = 20.0
SCATTER_FLOOR = 3.0
SCATTER_GAIN = 10.0
STEP_SIGMAS = 50.0


def build_spec(**params: Any) -> ScenarioSpec:
    """
    校验并构造场景参数

    Raises:
        BadSpecError: 参数不满足约束
    """
    try:
        return ScenarioSpec(**params)
    except ValidationError as e:
        details = [
            {"field": ".".join(str(loc) for loc in error["loc"]), "message": error["msg"]} for error in e.errors()
        ]
        raise BadSpecError(str(e.errors()[0]["msg"]), {"validation_errors": details}) from e


def code_name(index: int) -> str:
    return f"E{index:04d}"


def machine_name(index: int) -> str:
    return f"M{index + 1:02d}"


def machine_kind(spec: ScenarioSpec, index: int) -> FaultKind:
    if spec.fault_kind == FaultKind.MIXED:
        return FaultKind.GRADUAL if index % 2 == 0 else FaultKind.SUDDEN
    return spec.fault_kind


def machine_robot(index: int) -> Robot:
    # 每两台机器换一次机器人，混合场景下两种故障都会落在两个机器人上
    return Robot.LOAD if (index // 2) % 2 == 0 else Robot.UNLOAD


def _at(day: date, second: int) -> datetime:
    return datetime.combine(day, time()) + timedelta(seconds=int(second))


def _sensor_records(
    spec: ScenarioSpec,
    rng: np.random.Generator,
    machine: str,
    faulty: Robot,
    kind: FaultKind,
    onset: int,
) -> list[SensorRecord]:
    """两个机器人的传感器数据；只有 faulty 机器人在 [onset, fault_day] 内偏离"""
    sigma = spec.sensor_sigma
    records: list[SensorRecord] = []
    for robot in Robot:
        base = 1.0 + 0.1 * np.arange(1, spec.K + 1)
        for offset in range(spec.days):
            # 首尾两天总有测量，保证每个位置至少两个样本
            if offset not in (0, spec.days - 1) and rng.random() >= spec.sample_prob:
                continue
            day = spec.start_date + timedelta(days=offset)
            samples = int(rng.integers(1, spec.max_daily_samples + 1))
            seconds = np.sort(rng.integers(0, SECONDS_PER_DAY, size=samples))
            values = base + sigma * rng.standard_normal((samples, spec.K))

            if robot == faulty and onset <= offset <= spec.fault_day:
                if kind == FaultKind.GRADUAL:
                    frac = (offset - onset + 1) / (spec.fault_day - onset + 1)
                    scatter = sigma * (SCATTER_FLOOR + SCATTER_GAIN * frac)
                    values += DRIFT_SIGMAS * sigma * frac + scatter * rng.standard_normal((samples, spec.K))
                else:
                    scatter = sigma * SCATTER_GAIN
                    values += STEP_SIGMAS * sigma + scatter * rng.standard_normal((samples, spec.K))

            for second, row in zip(seconds, values, strict=True):
                timestamp = _at(day, second)
                records.extend(
                    SensorRecord(robot=robot, position=position, value=float(value), timestamp=timestamp, machine=machine)
                    for position, value in enumerate(row, start=1)
                )
    return records


def _daily_counts(
    spec: ScenarioSpec,
    rng: np.random.Generator,
    relevant: np.ndarray,
    kind: FaultKind,
    burst_start: int,
) -> np.ndarray:
    """days × n_codes 的计数矩阵"""
    counts = rng.poisson(spec.noise_rate, size=(spec.days, spec.n_codes))
    counts[:, relevant] = 0

    if kind == FaultKind.GRADUAL:
        rate, prob = spec.burst_rate, spec.burst_prob
    else:
        rate, prob = spec.sudden_burst_rate, spec.sudden_burst_prob
    window = spec.fault_day - burst_start + 1
    for offset in range(burst_start, spec.fault_day + 1):
        frac = (offset - burst_start + 1) / window
        fires = rng.random(len(relevant)) < prob
        extra = rng.poisson(rate * frac**2, size=len(relevant))
        counts[offset, relevant] = np.where(fires, 1 + extra, 0)
    return counts


def _log_records(
    spec: ScenarioSpec,
    rng: np.random.Generator,
    machine: str,
    counts: np.ndarray,
    relevant_set: set[int],
) -> list[LogRecord]:
    """把计数矩阵展开为日志记录，按 (时间, 事件码) 排序"""
    day_index, code_index = np.nonzero(counts)
    repeats = counts[day_index, code_index]
    days = np.repeat(day_index, repeats)
    codes = np.repeat(code_index, repeats)
    seconds = rng.integers(0, SECONDS_PER_DAY, size=len(days))
    order = np.lexsort((codes, seconds, days))

    records = []
    for i in order:
        code = int(codes[i])
        records.append(
            LogRecord(
                machine=machine,
                code=code_name(code),
                severity=Severity.HIGH if code in relevant_set else Severity.LOW,
                detail=f"synthetic event {code_name(code)}",
                timestamp=_at(spec.start_date + timedelta(days=int(days[i])), int(seconds[i])),
            )
        )
    return records


def generate(spec: ScenarioSpec) -> tuple[Dataset, GroundTruth]:
    """
    按场景参数生成数据集与真值

    Args:
        spec: 场景参数

    Returns:
        tuple[Dataset, GroundTruth]: 数据集（日志与两个机器人的传感器数据）与真值

    Raises:
        BadSpecError: 参数不满足约束
    """
    if spec.n_relevant > spec.n_codes or not 0 <= spec.fault_day < spec.days or spec.lead_days < 0:
        raise BadSpecError("n_relevant <= n_codes, 0 <= fault_day < days, lead_days >= 0")

    root = np.random.default_rng(spec.seed)
    relevant = np.sort(root.choice(spec.n_codes, size=spec.n_relevant, replace=False))
    relevant_set = {int(code) for code in relevant}

    logs: list[LogRecord] = []
    sensors: list[SensorRecord] = []
    machines: list[MachineTruth] = []
    counters = {FaultKind.GRADUAL: 0, FaultKind.SUDDEN: 0}
    for index in range(spec.n_machines):
        rng = np.random.default_rng([spec.seed, index])
        machine = machine_name(index)
        kind = machine_kind(spec, index)
        robot = machine_robot(index)

        span_days = spec.ramp_days if kind == FaultKind.GRADUAL else spec.sudden_days
        onset = max(0, spec.fault_day - span_days)
        burst_start = max(0, onset - spec.lead_days)

        sensors += _sensor_records(spec, rng, machine, robot, kind, onset)
        counts = _daily_counts(spec, rng, relevant, kind, burst_start)
        logs += _log_records(spec, rng, machine, counts, relevant_set)

        counters[kind] += 1
        prefix = "GF" if kind == FaultKind.GRADUAL else "SF"
        label = FaultLabel(
            machine=machine,
            robot=robot,
            fault_kind=f"{prefix}_{counters[kind]}",
            replacement_date=spec.start_date + timedelta(days=spec.fault_day),
        )
        machines.append(
            MachineTruth(
                label=label,
                kind=kind,
                deviation_onset=spec.start_date + timedelta(days=onset),
                burst_start=spec.start_date + timedelta(days=burst_start),
            )
        )

    dataset = Dataset(
        logs=logs,
        sensors=sensors,
        machines=[machine_name(index) for index in range(spec.n_machines)],
        span=DaySpan(first=spec.start_date, last=spec.start_date + timedelta(days=spec.days - 1)),
    )
    truth = GroundTruth(relevant_codes=[code_name(int(code)) for code in relevant], machines=machines)
    logger.debug(
        f"Generated {len(logs)} log records and {len(sensors)} sensor records for {spec.n_machines} machines"
    )
    return dataset, truth


def write_scenario(dataset: Dataset, truth: GroundTruth, output_dir: Path) -> list[Path]:
    """写出 logs.csv、sensors.csv、labels.csv 与 truth.json，格式与读取端一致"""
    return [
        write_log_csv(dataset.logs, output_dir / "logs.csv"),
        write_sensor_csv(dataset.sensors, output_dir / "sensors.csv"),
        write_labels_csv(truth.labels, output_dir / "labels.csv"),
        write_json(truth, output_dir / "truth.json"),
    ]
