"""
KNN 异常检测模块

每一行（一天）的异常分数为它到其余行中第 k 近邻的欧氏距离
"""

from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger
from scipy.spatial.distance import cdist

from app.core.exceptions import KTooLargeError, TooFewRowsError
from app.schemas.detection import AnomalyResult, EventCountMatrix
from app.utils.datetime import format_day
from app.utils.io import write_csv, write_json


def kth_neighbor_distances(points: np.ndarray, k: int) -> np.ndarray:
    """
    精确计算每一行到第 k 近邻（不含自身）的距离

    Raises:
        TooFewRowsError: 行数小于 2
        KTooLargeError: k 不小于行数
    """
    rows = points.shape[0]
    if rows < 2:
        raise TooFewRowsError(rows)
    if k < 1 or k >= rows:
        raise KTooLargeError(k, rows)

    distances = cdist(points, points, metric="euclidean")
    np.fill_diagonal(distances, np.inf)
    distances.sort(axis=1)
    return distances[:, k - 1]


def knn_scores(matrix: EventCountMatrix, k: int = 5) -> AnomalyResult:
    """
    KNN 异常评分

    Args:
        matrix: 计数矩阵，行为日期
        k: 近邻序号，默认 5

    Returns:
        AnomalyResult: 逐日分数，top_day 为分数最高的日期（并列取最早）
    """
    scores = kth_neighbor_distances(matrix.as_array(), k)
    # argmax 返回第一个最大值，即最早的日期
    top = int(np.argmax(scores))
    logger.debug(f"KNN scored {len(scores)} days with k={k}, top day {matrix.days[top]}")
    return AnomalyResult(days=matrix.days, scores=scores.tolist(), top_day=matrix.days[top])


def anomaly_frame(result: AnomalyResult) -> pd.DataFrame:
    return pd.DataFrame({"day": [format_day(day) for day in result.days], "score": result.scores})


def write_anomaly_result(result: AnomalyResult, output_dir: Path) -> list[Path]:
    """写出 anomaly.csv（day, score）与 anomaly.json 摘要"""
    summary = {
        "days": len(result.days),
        "max_score": max(result.scores),
        "top_day": format_day(result.top_day),
    }
    return [
        write_csv(anomaly_frame(result), output_dir / "anomaly.csv"),
        write_json(summary, output_dir / "anomaly.json"),
    ]
