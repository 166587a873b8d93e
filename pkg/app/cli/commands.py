"""
命令处理模块

每个子命令读取输入、运行对应的流水线阶段，把结果写入输出目录并返回输出文件列表。
运行清单（manifest.json）由 run_command 统一写出
"""

from collections.abc import Callable
from pathlib import Path
from typing import Any

import pandas as pd
from loguru import logger

from app.core.config import Settings
from app.core.exceptions import MissingInputError, NoRecordsForMachineError, NoSensorDataError
from app.middleware.logging import log_stage
from app.pipeline.countmatrix import all_codes_selection, build_count_matrix, write_count_matrix_csv
from app.pipeline.detectors import sensor_score_series, write_score_series_csv
from app.pipeline.evaluation import compare_pipelines, write_comparison
from app.pipeline.ingest import (
    IngestResult,
    build_dataset,
    read_labels_csv,
    read_log_csv,
    read_sensor_csv,
    write_log_csv,
)
from app.pipeline.knn import knn_scores, write_anomaly_result
from app.pipeline.redundancy import prune_redundant, write_decisions_csv
from app.pipeline.relevance import score_relevance, select_top_fraction, write_relevance_report
from app.pipeline.synth import build_spec, generate, write_scenario
from app.pipeline.vectorize import filter_logs, group_sensors, vectorize_events, write_event_series_csv
from app.schemas.records import Dataset, DaySpan, SensorRecord
from app.schemas.report import BaseResponse, RunManifest
from app.schemas.selection import SelectionResult
from app.schemas.synth import ScenarioSpec
from app.utils.io import file_digest, write_csv, write_json


# ==================== 输入 ====================


def _write_row_errors(result: IngestResult[Any], path: Path) -> Path | None:
    if not result.errors:
        return None
    frame = pd.DataFrame([error.model_dump() for error in result.errors], columns=["row", "code", "message"])
    return write_csv(frame, path)


def load_inputs(settings: Settings, need_sensors: bool = False) -> tuple[Dataset, list[Path]]:
    """
    读取日志与传感器表并组装数据集

    行级错误写入 *_errors.csv，不中断运行（STRICT_INGEST 时直接抛出）

    Raises:
        MissingInputError: 未提供日志文件
        NoSensorDataError: need_sensors 为 True 但没有传感器文件
    """
    if settings.LOG_CSV is None:
        raise MissingInputError("LOG_CSV")
    if need_sensors and (settings.SENSOR_CSV is None or not settings.SENSOR_CSV.is_file()):
        raise NoSensorDataError(settings.ROBOT.value, settings.MACHINE)

    outputs: list[Path] = []
    logs = read_log_csv(settings.LOG_CSV, strict=settings.STRICT_INGEST)
    sensors = IngestResult[SensorRecord]()
    if settings.SENSOR_CSV is not None:
        sensors = read_sensor_csv(settings.SENSOR_CSV, num_positions=settings.NUM_POSITIONS, strict=settings.STRICT_INGEST)

    settings.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, result in (("log_errors.csv", logs), ("sensor_errors.csv", sensors)):
        path = _write_row_errors(result, settings.OUTPUT_DIR / name)
        if path is not None:
            outputs.append(path)

    return build_dataset(logs.records, sensors.records), outputs


def input_digests(settings: Settings) -> dict[str, str]:
    """已提供且存在的输入文件的 SHA-256 摘要"""
    digests = {}
    for name in ("LOG_CSV", "SENSOR_CSV", "LABELS_CSV"):
        path: Path | None = getattr(settings, name)
        if path is not None and path.is_file():
            digests[name] = file_digest(path)
    return digests


def analysis_span(settings: Settings, dataset: Dataset) -> DaySpan:
    """数据集区间，可被 SPAN_START / SPAN_END 覆盖"""
    return DaySpan(first=settings.SPAN_START or dataset.span.first, last=settings.SPAN_END or dataset.span.last)


def resolve_machine(settings: Settings, dataset: Dataset) -> str:
    """未指定 MACHINE 时取数据集中的第一台机器"""
    if settings.MACHINE is not None:
        return settings.MACHINE
    if not dataset.machines:
        raise NoRecordsForMachineError("<any>")
    return dataset.machines[0]


def load_selection(path: Path) -> SelectionResult:
    if not path.is_file():
        raise MissingInputError("SELECTION_JSON", path)
    return SelectionResult.model_validate_json(path.read_text(encoding="utf-8"))


# ==================== 各阶段 ====================


def vectorize_stage(settings: Settings, dataset: Dataset) -> list[Path]:
    """MACHINE 为空时向量化全部机器"""
    span = analysis_span(settings, dataset)
    machines = [settings.MACHINE] if settings.MACHINE else dataset.machines
    series = []
    for machine in machines:
        with log_stage("vectorize", machine=machine):
            series += vectorize_events(dataset, machine, span)
    return [write_event_series_csv(series, settings.OUTPUT_DIR / "event_series.csv")]


def select_stage(settings: Settings, dataset: Dataset) -> tuple[list[Path], SelectionResult]:
    """相关性排序、按比例截取、冗余剔除"""
    output_dir = settings.OUTPUT_DIR
    machine = resolve_machine(settings, dataset)
    span = analysis_span(settings, dataset)

    with log_stage("select", machine=machine, robot=settings.ROBOT.value):
        events = vectorize_events(dataset, machine, span)
        sensors = group_sensors(dataset, settings.ROBOT, machine)
        sensor_scores = sensor_score_series(sensors, span)
        report = score_relevance(
            events,
            sensor_scores,
            positions=[series.position for series in sensors],
            std_mode=settings.STD_MODE,
            variant=settings.TAU_VARIANT,
            aggregation=settings.AGGREGATION,
            workers=settings.WORKERS,
        )
        selection = prune_redundant(
            select_top_fraction(report, settings.FRACTION),
            events,
            target_count=settings.TARGET_COUNT,
            rho=settings.RHO,
            source=settings.REDUNDANCY_SOURCE,
            std_mode=settings.STD_MODE,
            variant=settings.TAU_VARIANT,
        )

    outputs = write_relevance_report(report, output_dir)
    outputs += [
        write_json(selection, output_dir / "selection.json"),
        write_decisions_csv(selection, output_dir / "decisions.csv"),
        write_log_csv(filter_logs(dataset, selection.selected, machine), output_dir / "selected_logs.csv"),
    ]
    outputs += [
        write_score_series_csv(scores, output_dir / f"sensor_scores_p{series.position}.csv")
        for series, scores in zip(sensors, sensor_scores, strict=True)
    ]
    logger.info(f"✅ 选出 {len(selection.selected)}/{len(events)} 个事件")
    return outputs, selection


def detect_stage(settings: Settings, dataset: Dataset, selection: SelectionResult | None) -> list[Path]:
    """selection 为空时使用全部事件"""
    machine = resolve_machine(settings, dataset)
    span = analysis_span(settings, dataset)

    with log_stage("detect", machine=machine, k=settings.KNN_K):
        events = vectorize_events(dataset, machine, span)
        matrix = build_count_matrix(events, selection or all_codes_selection(events), span)
        result = knn_scores(matrix, settings.KNN_K)

    return [
        write_count_matrix_csv(matrix, settings.OUTPUT_DIR / "count_matrix.csv"),
        *write_anomaly_result(result, settings.OUTPUT_DIR),
    ]


def evaluate_stage(settings: Settings, dataset: Dataset) -> list[Path]:
    if settings.LABELS_CSV is None:
        raise MissingInputError("LABELS_CSV")
    labels = read_labels_csv(settings.LABELS_CSV)
    with log_stage("evaluate", machines=len(labels)):
        table = compare_pipelines(dataset, labels, settings)
    return write_comparison(table, settings.OUTPUT_DIR)


# ==================== 子命令 ====================


def cmd_vectorize(settings: Settings) -> list[Path]:
    """读取日志并输出逐日事件计数"""
    dataset, outputs = load_inputs(settings)
    return outputs + vectorize_stage(settings, dataset)


def cmd_select(settings: Settings) -> list[Path]:
    """
    特征选择

    Raises:
        NoSensorDataError: 没有传感器文件
    """
    dataset, outputs = load_inputs(settings, need_sensors=True)
    paths, _ = select_stage(settings, dataset)
    return outputs + paths


def cmd_detect(settings: Settings) -> list[Path]:
    """KNN 检测；提供 SELECTION_JSON 时只使用其中的事件"""
    dataset, outputs = load_inputs(settings)
    selection = load_selection(settings.SELECTION_JSON) if settings.SELECTION_JSON else None
    return outputs + detect_stage(settings, dataset, selection)


def cmd_evaluate(settings: Settings) -> list[Path]:
    """
    对比全部特征与选择后特征的检出情况

    Raises:
        MissingInputError: 未提供标签文件
    """
    dataset, outputs = load_inputs(settings)
    return outputs + evaluate_stage(settings, dataset)


def scenario_spec(settings: Settings) -> ScenarioSpec:
    """
    由 SEED 与 SYNTH_* 配置项构造场景参数

    Raises:
        BadSpecError: 参数组合不合法
    """
    return build_spec(
        seed=settings.SEED,
        n_machines=settings.SYNTH_MACHINES,
        days=settings.SYNTH_DAYS,
        K=settings.SYNTH_POSITIONS,
        n_codes=settings.SYNTH_CODES,
        n_relevant=settings.SYNTH_RELEVANT,
        fault_kind=settings.SYNTH_FAULT_KIND,
        fault_day=settings.SYNTH_FAULT_DAY,
        lead_days=settings.SYNTH_LEAD_DAYS,
        noise_rate=settings.SYNTH_NOISE_RATE,
    )


def cmd_synth(settings: Settings, spec: ScenarioSpec | None = None) -> list[Path]:
    """生成合成场景，输出格式与读取端一致；未给出 spec 时取自配置"""
    spec = spec or scenario_spec(settings)
    with log_stage("synth", seed=spec.seed, machines=spec.n_machines):
        dataset, truth = generate(spec)
    paths = write_scenario(dataset, truth, settings.OUTPUT_DIR)
    paths.append(write_json(spec, settings.OUTPUT_DIR / "scenario.json"))
    return paths


def run_all(settings: Settings) -> list[Path]:
    """
    依次运行 vectorize、select、detect，提供标签时再运行 evaluate

    没有传感器文件或关闭特征选择时，detect 使用全部事件
    """
    dataset, outputs = load_inputs(settings)
    outputs += vectorize_stage(settings, dataset)

    selection = None
    if settings.SELECTION_ENABLED and dataset.sensors:
        paths, selection = select_stage(settings, dataset)
        outputs += paths
    outputs += detect_stage(settings, dataset, selection)

    if settings.LABELS_CSV is not None:
        outputs += evaluate_stage(settings, dataset)
    return outputs


# ==================== 运行清单 ====================


def write_manifest(command: str, settings: Settings, outputs: list[Path]) -> Path:
    """写出运行清单；不含时间戳，重复运行得到相同文件"""
    output_dir = settings.OUTPUT_DIR
    names = [path.relative_to(output_dir).as_posix() if path.is_relative_to(output_dir) else str(path) for path in outputs]
    manifest = RunManifest(
        command=command,
        settings=settings.to_manifest(),
        inputs=input_digests(settings),
        outputs=[*names, "manifest.json"],
    )
    return write_json(manifest, output_dir / "manifest.json")


def run_command(command: str, settings: Settings, handler: Callable[[], list[Path]]) -> BaseResponse[dict[str, Any]]:
    """
    运行一个子命令并写出运行清单

    Returns:
        BaseResponse: 成功时 data 中给出输出目录与输出文件
    """
    with log_stage(command):
        outputs = handler()
        manifest = write_manifest(command, settings, outputs)
    return BaseResponse(
        success=True,
        code=0,
        msg=f"{command} 完成",
        data={
            "output_dir": str(settings.OUTPUT_DIR),
            "outputs": [path.name for path in [*outputs, manifest]],
        },
    )
