"""
相关特征选择模块

用 Kendall τ 比较每个事件的逐日鲁棒分数与每个传感器位置的对齐分数，
按聚合 τ 排序后保留前一定比例的事件
"""

import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.stats import kendalltau

from app.core.config import Aggregation, StdMode, TauVariant
from app.core.exceptions import BadFractionError, EmptyReportError, SpanMismatchError, TooShortError
from app.pipeline.detectors import robust_scores
from app.schemas.selection import RelevanceEntry, RelevanceReport, SelectionResult, SelectionStage
from app.schemas.series import EventSeries, ScoreSeries
from app.schemas.validators import validate_fraction
from app.utils.io import write_csv, write_json


def _tau_a(x: np.ndarray, y: np.ndarray) -> float:
    """τ-a：(同序对 - 异序对) / 全部对数"""
    n = len(x)
    dx = np.sign(x[:, None] - x[None, :])
    dy = np.sign(y[:, None] - y[None, :])
    # 上三角之外的对被计了两次
    return float((dx * dy).sum() / 2.0) / (n * (n - 1) / 2.0)


def tau_coefficient(x: np.ndarray, y: np.ndarray, variant: TauVariant = TauVariant.B) -> float:
    """
    两个等长数组的 Kendall τ

    任一数组为常数时返回 0

    Raises:
        TooShortError: 长度小于 2
    """
    if len(x) != len(y):
        raise ValueError("x 与 y 长度不一致")
    if len(x) < 2:
        raise TooShortError(len(x))
    if np.all(x == x[0]) or np.all(y == y[0]):
        return 0.0

    if variant == TauVariant.A:
        tau = _tau_a(x, y)
    else:
        tau = float(kendalltau(x, y, variant="b", method="asymptotic").statistic)
    if math.isnan(tau):
        return 0.0
    return min(1.0, max(-1.0, tau))


def kendall_tau(x: ScoreSeries, y: ScoreSeries, variant: TauVariant = TauVariant.B) -> float:
    """
    两条按日对齐的分数序列之间的 Kendall τ（默认 τ-b）

    Raises:
        SpanMismatchError: 区间不一致
        TooShortError: 长度小于 2
    """
    if x.span != y.span:
        raise SpanMismatchError(x.span, y.span)
    return tau_coefficient(x.as_array(), y.as_array(), variant)


def _entry(
    code: str,
    event_scores: np.ndarray,
    sensor_arrays: list[np.ndarray],
    variant: TauVariant,
    aggregation: Aggregation,
) -> RelevanceEntry:
    taus = [tau_coefficient(event_scores, sensor, variant) for sensor in sensor_arrays]
    aggregate = max(taus) if aggregation == Aggregation.MAX else float(np.mean(taus))
    return RelevanceEntry(code=code, taus=taus, aggregate=aggregate)


def score_relevance(
    events: list[EventSeries],
    sensor_scores: list[ScoreSeries],
    positions: list[int] | None = None,
    std_mode: StdMode = StdMode.SAMPLE,
    variant: TauVariant = TauVariant.B,
    aggregation: Aggregation = Aggregation.MAX,
    workers: int = 1,
) -> RelevanceReport:
    """
    计算每个事件与各传感器位置的相关性

    τ 直接取原值（不取绝对值）：正相关表示两者的离群程度同步升高

    Args:
        events: 事件计数序列
        sensor_scores: 每个位置一条按日对齐的持续性分数
        positions: 位置编号，默认 1..K
        workers: 并行线程数，结果顺序与并行度无关

    Returns:
        RelevanceReport: 按聚合 τ 降序、事件码升序排列

    Raises:
        SpanMismatchError: 区间不一致
    """
    spans = {series.span for series in events} | {series.span for series in sensor_scores}
    if len(spans) > 1:
        ordered = sorted(spans, key=str)
        raise SpanMismatchError(ordered[0], ordered[1])

    sensor_arrays = [series.as_array() for series in sensor_scores]

    def compute(series: EventSeries) -> RelevanceEntry:
        scores = robust_scores(series, std_mode).as_array()
        return _entry(series.code, scores, sensor_arrays, variant, aggregation)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(compute, events))
    else:
        entries = [compute(series) for series in events]

    entries.sort(key=lambda entry: (-entry.aggregate, entry.code))
    return RelevanceReport(positions=positions or list(range(1, len(sensor_scores) + 1)), entries=entries)


def select_top_fraction(report: RelevanceReport, fraction: float) -> SelectionResult:
    """
    保留聚合 τ 最高的 ceil(fraction × N) 个事件

    Raises:
        EmptyReportError: 报告为空
        BadFractionError: 比例不在 (0, 1] 内
    """
    try:
        validate_fraction(fraction)
    except ValueError as e:
        raise BadFractionError(fraction) from e
    if not report.entries:
        raise EmptyReportError()

    # 先舍入再取上整，避免浮点误差多选一个
    keep = math.ceil(round(fraction * len(report.entries), 9))
    return SelectionResult(
        selected=report.codes[:keep],
        threshold_used=fraction,
        stage=SelectionStage.RELEVANCE,
    )


def relevance_frame(report: RelevanceReport) -> pd.DataFrame:
    """code, tau_1..tau_K, aggregate"""
    columns = ["code", *(f"tau_{position}" for position in report.positions), "aggregate"]
    rows = [(entry.code, *entry.taus, entry.aggregate) for entry in report.entries]
    return pd.DataFrame(rows, columns=columns)


def write_relevance_report(report: RelevanceReport, output_dir: Path) -> list[Path]:
    """同时写出 CSV 与 JSON"""
    return [
        write_csv(relevance_frame(report), output_dir / "relevance.csv"),
        write_json(report, output_dir / "relevance.json"),
    ]
