"""
单变量异常检测器测试
"""

from datetime import datetime, timedelta

import numpy as np
import pytest

from app.core.config import StdMode
from app.core.exceptions import TooShortError
from app.pipeline.detectors import align_daily_max, persistence_scores, robust_scores, score_series_frame
from app.schemas.records import Robot
from app.schemas.series import EventSeries, RawScoreSeries, SensorSeries
from tests.helpers import span

TRIALS = 200


def sensor_series(values: list[float]) -> SensorSeries:
    start = datetime(2020, 1, 1)
    return SensorSeries(
        robot=Robot.LOAD,
        position=1,
        timestamps=[start + timedelta(hours=i) for i in range(len(values))],
        values=values,
    )


def event_series(counts: list[int]) -> EventSeries:
    first = datetime(2020, 1, 1).date()
    last = first + timedelta(days=len(counts) - 1)
    return EventSeries(
        machine="1", code="A", span=span(first.isoformat(), last.isoformat()), counts=counts
    )


class TestPersistenceScores:
    """持续性检查测试"""

    def test_differences(self):
        """测试与前一个值之差的绝对值"""
        assert persistence_scores(sensor_series([2.0, 5.0, 3.0])).scores == [0.0, 3.0, 2.0]

    def test_constant(self):
        """测试常数序列"""
        assert persistence_scores(sensor_series([1.5] * 4)).scores == [0.0, 0.0, 0.0, 0.0]

    def test_two_samples(self):
        """测试只有一个差值"""
        assert persistence_scores(sensor_series([0.0, 10.0])).scores == [0.0, 10.0]

    def test_timestamps_preserved(self):
        """测试输出时间戳与输入一致"""
        series = sensor_series([1.0, 2.0, 4.0])
        assert persistence_scores(series).timestamps == series.timestamps

    def test_too_short(self):
        """测试少于 2 个样本"""
        with pytest.raises(TooShortError):
            persistence_scores(sensor_series([1.0]))

    def test_translation_invariance(self):
        """测试整体平移不改变分数"""
        rng = np.random.default_rng(0)
        for _ in range(TRIALS):
            values = rng.normal(size=int(rng.integers(2, 40)))
            shift = float(rng.uniform(-100, 100))
            base = persistence_scores(sensor_series(values.tolist())).scores
            moved = persistence_scores(sensor_series((values + shift).tolist())).scores
            np.testing.assert_allclose(moved, base, atol=1e-9)

    def test_scale_equivariance(self):
        """测试整体乘以 a 时分数乘以 |a|"""
        rng = np.random.default_rng(3)
        for _ in range(TRIALS):
            values = rng.normal(size=int(rng.integers(2, 40)))
            a = float(rng.uniform(0.1, 10.0)) * (1 if rng.random() < 0.5 else -1)
            base = np.asarray(persistence_scores(sensor_series(values.tolist())).scores)
            scaled = persistence_scores(sensor_series((a * values).tolist())).scores
            np.testing.assert_allclose(scaled, abs(a) * base, rtol=1e-9, atol=1e-12)


class TestRobustScores:
    """鲁棒评分测试"""

    def test_outlier(self):
        """测试中位数 0、样本标准差 5"""
        assert robust_scores(event_series([0, 0, 0, 10])).scores == [0.0, 0.0, 0.0, 2.0]

    def test_constant(self):
        """测试标准差为 0 时全部为 0"""
        assert robust_scores(event_series([3, 3, 3])).scores == [0.0, 0.0, 0.0]

    def test_two_points(self):
        """测试两个点"""
        assert robust_scores(event_series([1, 2])).scores == pytest.approx([0.70710678, 0.70710678])

    def test_population_std(self):
        """测试总体标准差口径"""
        scores = robust_scores(event_series([0, 0, 0, 10]), StdMode.POPULATION).scores
        assert scores[3] == pytest.approx(10 / np.sqrt(75 / 4))

    def test_too_short(self):
        """测试单点序列"""
        with pytest.raises(TooShortError):
            robust_scores(event_series([4]))

    def test_affine_invariance(self):
        """测试 a·count + b（a > 0）不改变分数"""
        rng = np.random.default_rng(1)
        for _ in range(TRIALS):
            counts = rng.poisson(2.0, size=int(rng.integers(2, 60)))
            a, b = int(rng.integers(1, 10)), int(rng.integers(0, 50))
            base = robust_scores(event_series(counts.tolist())).scores
            scaled = robust_scores(event_series((a * counts + b).tolist())).scores
            np.testing.assert_allclose(scaled, base, atol=1e-9)


class TestAlignDailyMax:
    """逐日取最大对齐测试"""

    def test_max_and_zero_fill(self):
        """测试同日取最大、无分数的日期为 0"""
        raw = RawScoreSeries(
            timestamps=[datetime(2020, 1, 1, 1), datetime(2020, 1, 1, 2), datetime(2020, 1, 3, 0)],
            scores=[3.0, 1.0, 2.0],
        )
        assert align_daily_max(raw, span("2020-01-01", "2020-01-03")).scores == [3.0, 0.0, 2.0]

    def test_empty(self):
        """测试没有分数"""
        raw = RawScoreSeries(timestamps=[], scores=[])
        assert align_daily_max(raw, span("2020-01-01", "2020-01-04")).scores == [0.0] * 4

    def test_single_point_per_day(self):
        """测试每天一个点时原样通过"""
        raw = RawScoreSeries(timestamps=[datetime(2020, 1, d, 12) for d in (1, 2, 3)], scores=[0.5, 0.25, 4.0])
        assert align_daily_max(raw, span("2020-01-01", "2020-01-03")).scores == [0.5, 0.25, 4.0]

    def test_points_outside_span_ignored(self):
        """测试区间外的点被忽略"""
        raw = RawScoreSeries(timestamps=[datetime(2019, 12, 31), datetime(2020, 1, 2)], scores=[9.0, 1.0])
        assert align_daily_max(raw, span("2020-01-01", "2020-01-02")).scores == [0.0, 1.0]

    def test_frame(self):
        """测试导出两列"""
        aligned = align_daily_max(RawScoreSeries(timestamps=[], scores=[]), span("2020-01-01", "2020-01-02"))
        frame = score_series_frame(aligned)
        assert frame["day"].tolist() == ["2020-01-01", "2020-01-02"]
