"""
评估模块

按“最高分日期落在更换日期当天或之前不超过 W 天”的准则判定检出，
并对每台有标签的机器比较全部特征与选择后特征两条流水线
"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger

from app.core.config import EvalSpan, Settings
from app.core.exceptions import AppException, DateOutOfRangeError, NoLabelsError
from app.pipeline.countmatrix import all_codes_selection, build_count_matrix
from app.pipeline.detectors import sensor_score_series
from app.pipeline.knn import knn_scores
from app.pipeline.redundancy import prune_redundant
from app.pipeline.relevance import score_relevance, select_top_fraction
from app.pipeline.vectorize import group_sensors, vectorize_events
from app.schemas.detection import AnomalyResult
from app.schemas.evaluation import ArmResult, ComparisonRow, ComparisonTable, EvalOutcome, FaultLabel
from app.schemas.records import Dataset, DaySpan
from app.schemas.series import ScoreSeries
from app.utils.datetime import format_day
from app.utils.io import write_csv, write_json

ARMS = ("raw", "selected", "sensor")


def judge_detection(result: AnomalyResult, label: FaultLabel, window_days: int) -> EvalOutcome:
    """
    判定一次检测是否命中

    detected = top_day <= 更换日期 且 更换日期 - top_day <= window_days

    Raises:
        DateOutOfRangeError: 更换日期不在评分区间内
    """
    if label.replacement_date not in result.days:
        raise DateOutOfRangeError(label.replacement_date)

    lead_days = (label.replacement_date - result.top_day).days
    return EvalOutcome(
        machine=label.machine,
        detected=0 <= lead_days <= window_days,
        top_day=result.top_day,
        replacement_date=label.replacement_date,
        lead_days=lead_days,
    )


def evaluation_span(dataset: Dataset, label: FaultLabel, settings: Settings) -> DaySpan:
    """评分区间：默认截止到更换日期"""
    first = settings.SPAN_START or dataset.span.first
    if label.replacement_date not in dataset.span or label.replacement_date < first:
        raise DateOutOfRangeError(label.replacement_date)
    if settings.EVAL_SPAN == EvalSpan.UNTIL_REPLACEMENT:
        last = label.replacement_date
    else:
        last = settings.SPAN_END or dataset.span.last
        if last < label.replacement_date:
            raise DateOutOfRangeError(label.replacement_date)
    return DaySpan(first=first, last=last)


def sensor_anomaly(sensor_scores: list[ScoreSeries]) -> AnomalyResult:
    """只用传感器：各位置对齐分数的逐日最大值"""
    span = sensor_scores[0].span
    scores = np.max(np.vstack([series.as_array() for series in sensor_scores]), axis=0)
    days = span.days()
    return AnomalyResult(days=days, scores=scores.tolist(), top_day=days[int(np.argmax(scores))])


def evaluate_machine(dataset: Dataset, label: FaultLabel, settings: Settings) -> ComparisonRow:
    """
    单台机器的对比

    Raises:
        AppException: 任一流水线阶段的错误
    """
    span = evaluation_span(dataset, label, settings)
    events = vectorize_events(dataset, label.machine, span)

    raw_matrix = build_count_matrix(events, all_codes_selection(events), span)
    raw = ArmResult(
        feature_count=len(raw_matrix.codes),
        outcome=judge_detection(knn_scores(raw_matrix, settings.KNN_K), label, settings.WINDOW_DAYS),
    )

    selected = sensor = None
    if settings.SELECTION_ENABLED or settings.SENSOR_ARM:
        sensors = group_sensors(dataset, label.robot, label.machine)
        sensor_scores = sensor_score_series(sensors, span)

        if settings.SELECTION_ENABLED:
            report = score_relevance(
                events,
                sensor_scores,
                positions=[series.position for series in sensors],
                std_mode=settings.STD_MODE,
                variant=settings.TAU_VARIANT,
                aggregation=settings.AGGREGATION,
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
            matrix = build_count_matrix(events, selection, span)
            selected = ArmResult(
                feature_count=len(matrix.codes),
                outcome=judge_detection(knn_scores(matrix, settings.KNN_K), label, settings.WINDOW_DAYS),
            )

        if settings.SENSOR_ARM:
            sensor = ArmResult(
                feature_count=len(sensor_scores),
                outcome=judge_detection(sensor_anomaly(sensor_scores), label, settings.WINDOW_DAYS),
            )

    return ComparisonRow(
        machine=label.machine,
        robot=label.robot,
        fault_kind=label.fault_kind,
        replacement_date=label.replacement_date,
        messages=dataset.message_count(label.machine),
        raw=raw,
        selected=selected,
        sensor=sensor,
    )


def compare_pipelines(dataset: Dataset, labels: list[FaultLabel], settings: Settings) -> ComparisonTable:
    """
    对每台有标签的机器运行两条（可选三条）流水线并判定

    单台机器失败时该行记录错误信息，其余机器照常评估

    Args:
        dataset: 数据集
        labels: 故障标签，每台机器一个
        settings: 运行配置

    Returns:
        ComparisonTable: 行顺序与标签顺序一致
    """
    if not labels:
        raise NoLabelsError()

    def failed(label: FaultLabel, error: str) -> ComparisonRow:
        return ComparisonRow(
            machine=label.machine,
            robot=label.robot,
            fault_kind=label.fault_kind,
            replacement_date=label.replacement_date,
            messages=dataset.message_count(label.machine),
            error=error,
        )

    def run(label: FaultLabel) -> ComparisonRow:
        try:
            row = evaluate_machine(dataset, label, settings)
        except AppException as e:
            logger.error(f"❌ 机器 {label.machine} 评估失败: {e.message}")
            return failed(label, f"{type(e).__name__}: {e.message}")
        except Exception as e:
            logger.exception(f"❌ 机器 {label.machine} 评估异常: {e}")
            return failed(label, f"{type(e).__name__}: {e}")
        logger.info(f"✅ 机器 {label.machine} 评估完成")
        return row

    if settings.WORKERS > 1:
        with ThreadPoolExecutor(max_workers=settings.WORKERS) as pool:
            rows = list(pool.map(run, labels))
    else:
        rows = [run(label) for label in labels]
    return ComparisonTable(rows=rows)


# ==================== 输出 ====================


def _arm_columns(table: ComparisonTable) -> list[str]:
    """出现过结果的分支，raw 总是输出"""
    return [arm for arm in ARMS if arm == "raw" or any(getattr(row, arm) is not None for row in table.rows)]


def comparison_frame(table: ComparisonTable) -> pd.DataFrame:
    """每行一台机器，每个分支四列：特征数、是否检出、最高分日期、提前天数"""
    arms = _arm_columns(table)
    records = []
    for row in table.rows:
        record: dict[str, object] = {
            "machine": row.machine,
            "robot": row.robot.value,
            "fault_kind": row.fault_kind,
            "replacement_date": format_day(row.replacement_date),
            "messages": row.messages,
        }
        for arm in arms:
            result: ArmResult | None = getattr(row, arm)
            record[f"{arm}_features"] = result.feature_count if result else None
            record[f"{arm}_detected"] = result.outcome.detected if result else None
            record[f"{arm}_top_day"] = format_day(result.outcome.top_day) if result else None
            record[f"{arm}_lead_days"] = result.outcome.lead_days if result else None
        record["error"] = row.error or ""
        records.append(record)
    columns = ["machine", "robot", "fault_kind", "replacement_date", "messages"]
    for arm in arms:
        columns += [f"{arm}_features", f"{arm}_detected", f"{arm}_top_day", f"{arm}_lead_days"]
    return pd.DataFrame(records, columns=[*columns, "error"])


def _verdict(result: ArmResult | None, row: ComparisonRow) -> str:
    if row.error is not None:
        return "Error"
    if result is None:
        return "-"
    return "Yes" if result.outcome.detected else "No"


def render_table(table: ComparisonTable) -> str:
    """
    渲染对比表为对齐的纯文本

    末尾一行为各分支的检出数 / 机器总数
    """
    arms = _arm_columns(table)
    header = ["Machine", "Robot", "Fault", "Replacement", "#Messages"]
    for arm in arms:
        title = arm.capitalize()
        header += [f"#{title}", f"{title}(AD)"]

    cells: list[list[str]] = []
    for row in table.rows:
        line = [row.machine, row.robot.value, row.fault_kind, format_day(row.replacement_date), str(row.messages)]
        for arm in arms:
            result: ArmResult | None = getattr(row, arm)
            line += [str(result.feature_count) if result else "-", _verdict(result, row)]
        cells.append(line)

    widths = [max(len(text) for text in column) for column in zip(header, *cells, strict=True)]

    def fmt(line: list[str]) -> str:
        return "  ".join(text.ljust(width) for text, width in zip(line, widths, strict=True)).rstrip()

    lines = [fmt(header), fmt(["-" * width for width in widths])]
    lines += [fmt(line) for line in cells]
    summary = ", ".join(f"{arm} {table.detected_count(arm)}/{table.total}" for arm in arms)
    lines.append(f"Detected: {summary}")
    return "\n".join(lines) + "\n"


def write_comparison(table: ComparisonTable, output_dir: Path) -> list[Path]:
    """写出 comparison.csv、comparison.txt 与 comparison.json"""
    text_path = output_dir / "comparison.txt"
    text_path.parent.mkdir(parents=True, exist_ok=True)
    text_path.write_text(render_table(table), encoding="utf-8")
    return [
        write_csv(comparison_frame(table), output_dir / "comparison.csv"),
        text_path,
        write_json(table, output_dir / "comparison.json"),
    ]
