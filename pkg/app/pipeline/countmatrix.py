"""
事件计数矩阵模块

以天为行、选中的事件码为列构造计数矩阵，作为检测器的输入
"""

from pathlib import Path

import pandas as pd

from app.core.exceptions import EmptySelectionError, SpanMismatchError, UnknownCodeError
from app.schemas.detection import EventCountMatrix
from app.schemas.records import DaySpan
from app.schemas.selection import SelectionResult, SelectionStage
from app.schemas.series import EventSeries
from app.utils.datetime import format_day
from app.utils.io import write_csv


def build_count_matrix(events: list[EventSeries], selection: SelectionResult, span: DaySpan) -> EventCountMatrix:
    """
    构造计数矩阵

    列顺序与选择结果一致，元素为原始计数（不做加权）

    Raises:
        EmptySelectionError: 选择为空
        UnknownCodeError: 选中的事件码没有对应序列
        SpanMismatchError: 序列区间与 span 不一致
    """
    if not selection.selected:
        raise EmptySelectionError()

    by_code = {series.code: series for series in events}
    columns = []
    for code in selection.selected:
        series = by_code.get(code)
        if series is None:
            raise UnknownCodeError(code)
        if series.span != span:
            raise SpanMismatchError(series.span, span)
        columns.append(series.counts)

    values = [list(row) for row in zip(*columns, strict=True)]
    return EventCountMatrix(days=span.days(), codes=list(selection.selected), values=values)


def all_codes_selection(events: list[EventSeries]) -> SelectionResult:
    """不做特征选择时的“全部特征”选择结果"""
    return SelectionResult(selected=[series.code for series in events], threshold_used=1.0, stage=SelectionStage.RELEVANCE)


def count_matrix_frame(matrix: EventCountMatrix) -> pd.DataFrame:
    """首列为日期，其余列为事件码"""
    frame = pd.DataFrame(matrix.values, columns=matrix.codes)
    frame.insert(0, "day", [format_day(day) for day in matrix.days])
    return frame


def write_count_matrix_csv(matrix: EventCountMatrix, path: Path) -> Path:
    return write_csv(count_matrix_frame(matrix), path)
