"""
单变量异常检测器

- 持续性检查：不规则传感器序列，分数为与前一个测量值之差的绝对值
- 鲁棒评分：逐日计数序列，分数为 |x - 中位数| / 标准差
- 逐日取最大对齐：把不规则分数折叠为每天一个值，没有分数的日期为 0
"""

from pathlib import Path

import numpy as np
import pandas as pd

from app.core.config import StdMode
from app.core.exceptions import TooShortError
from app.schemas.records import DaySpan
from app.schemas.series import EventSeries, RawScoreSeries, ScoreSeries, SensorSeries
from app.utils.datetime import format_day
from app.utils.io import write_csv


def persistence_scores(series: SensorSeries) -> RawScoreSeries:
    """
    持续性检查

    第 i 个分数为 |v_i - v_{i-1}|，第 0 个分数记为 0，输出与输入等长

    Raises:
        TooShortError: 少于 2 个样本
    """
    if len(series) < 2:
        raise TooShortError(len(series))

    values = np.asarray(series.values, dtype=float)
    scores = np.zeros_like(values)
    scores[1:] = np.abs(np.diff(values))
    return RawScoreSeries(timestamps=series.timestamps, scores=scores.tolist())


def robust_values(counts: np.ndarray, std_mode: StdMode = StdMode.SAMPLE) -> np.ndarray:
    """对数组计算鲁棒分数；标准差为 0 时全部为 0"""
    ddof = 1 if std_mode == StdMode.SAMPLE else 0
    std = float(np.std(counts, ddof=ddof))
    if std == 0.0:
        return np.zeros_like(counts, dtype=float)
    return np.abs(counts - np.median(counts)) / std


def robust_scores(series: EventSeries, std_mode: StdMode = StdMode.SAMPLE) -> ScoreSeries:
    """
    鲁棒评分

    中位数与标准差取自整条序列的全部样本，默认使用样本标准差（除数 n-1）

    Raises:
        TooShortError: 序列长度小于 2
    """
    if len(series.counts) < 2:
        raise TooShortError(len(series.counts))
    scores = robust_values(series.as_array(), std_mode)
    return ScoreSeries(span=series.span, scores=scores.tolist())


def align_daily_max(raw: RawScoreSeries, span: DaySpan) -> ScoreSeries:
    """
    逐日取最大值对齐

    区间内每天一个分数：有分数的日期取最大值，没有的日期为 0，区间外的点忽略
    """
    aligned = np.zeros(len(span), dtype=float)
    for timestamp, score in zip(raw.timestamps, raw.scores, strict=True):
        day = timestamp.date()
        if day in span:
            index = span.index(day)
            aligned[index] = max(aligned[index], score)
    return ScoreSeries(span=span, scores=aligned.tolist())


def sensor_score_series(sensors: list[SensorSeries], span: DaySpan) -> list[ScoreSeries]:
    """每个位置：持续性检查后按天对齐"""
    return [align_daily_max(persistence_scores(series), span) for series in sensors]


def score_series_frame(series: ScoreSeries) -> pd.DataFrame:
    return pd.DataFrame({"day": [format_day(day) for day in series.span.days()], "score": series.scores})


def write_score_series_csv(series: ScoreSeries, path: Path) -> Path:
    """导出 (day, score) 两列，便于绘图"""
    return write_csv(score_series_frame(series), path)
