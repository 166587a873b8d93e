"""
合成数据测试

确定性、预埋结构、往返兼容与守恒
"""

from collections import Counter
from datetime import timedelta

import numpy as np
import pytest

from app.core.config import Settings
from app.core.exceptions import BadSpecError
from app.pipeline.countmatrix import all_codes_selection, build_count_matrix
from app.pipeline.detectors import robust_scores, sensor_score_series
from app.pipeline.evaluation import compare_pipelines
from app.pipeline.ingest import build_dataset, read_labels_csv, read_log_csv, read_sensor_csv
from app.pipeline.redundancy import prune_redundant
from app.pipeline.relevance import score_relevance, select_top_fraction
from app.pipeline.synth import build_spec, generate
from app.pipeline.vectorize import group_sensors, vectorize_events
from app.schemas.synth import FaultKind, GroundTruth


def relevant_counts(dataset, truth: GroundTruth, machine: str) -> np.ndarray:
    """days × n_relevant，区间为整个数据集"""
    by_code = {series.code: series for series in vectorize_events(dataset, machine)}
    columns = [by_code[code].counts if code in by_code else [0] * len(dataset.span) for code in truth.relevant_codes]
    return np.array(columns).T


def select_codes(dataset, machine: str, robot) -> tuple[list[str], dict[str, float]]:
    events = vectorize_events(dataset, machine)
    sensors = group_sensors(dataset, robot, machine)
    report = score_relevance(events, sensor_score_series(sensors, dataset.span))
    selection = prune_redundant(select_top_fraction(report, 0.20), events, target_count=40)
    return selection.selected, {entry.code: entry.aggregate for entry in report.entries}


class TestBuildSpec:
    """场景参数校验测试"""

    def test_too_many_relevant(self):
        """测试 n_relevant 大于 n_codes"""
        with pytest.raises(BadSpecError):
            build_spec(n_codes=5, n_relevant=6)

    def test_fault_day_out_of_range(self):
        """测试 fault_day 不小于 days"""
        with pytest.raises(BadSpecError):
            build_spec(days=50, fault_day=50)

    def test_negative_lead(self):
        """测试 lead_days 为负"""
        with pytest.raises(BadSpecError):
            build_spec(lead_days=-1)


class TestGenerate:
    """生成测试"""

    def test_deterministic(self, small_spec, small_scenario):
        """测试相同参数重复生成得到相同数据"""
        assert generate(small_spec) == small_scenario

    def test_seed_changes_data(self, small_spec, small_scenario):
        """测试不同种子得到不同数据"""
        other, _ = generate(small_spec.model_copy(update={"seed": 8}))
        assert other.logs != small_scenario[0].logs

    def test_truth(self, small_spec, small_truth):
        """测试真值：相关事件码、故障形态交替与更换日期"""
        assert len(small_truth.relevant_codes) == small_spec.n_relevant
        assert [machine.kind for machine in small_truth.machines] == [FaultKind.GRADUAL, FaultKind.SUDDEN]
        assert [label.fault_kind for label in small_truth.labels] == ["GF_1", "SF_1"]
        replacement = small_spec.start_date + timedelta(days=small_spec.fault_day)
        assert all(label.replacement_date == replacement for label in small_truth.labels)

    def test_span_and_machines(self, small_spec, small_scenario):
        """测试区间与机器"""
        dataset, _ = small_scenario
        assert len(dataset.span) == small_spec.days
        assert dataset.machines == ["M01", "M02"]

    def test_relevant_codes_fire_only_in_burst_window(self, small_scenario):
        """测试相关事件只在成簇窗口内触发"""
        dataset, truth = small_scenario
        days = dataset.span.days()
        for machine in truth.machines:
            counts = relevant_counts(dataset, truth, machine.label.machine)
            active = [day for day, row in zip(days, counts, strict=True) if row.sum() > 0]
            assert min(active) >= machine.burst_start
            assert max(active) <= machine.label.replacement_date

    def test_gradual_lead_structure(self):
        """测试渐变故障中相关事件的鲁棒分数先于传感器分数约 lead_days 天升高"""
        spec = build_spec(seed=3, fault_kind=FaultKind.GRADUAL, lead_days=10)
        dataset, truth = generate(spec)
        machine = truth.machines[0]
        assert (machine.deviation_onset - machine.burst_start).days == spec.lead_days

        # 事件侧：任一相关事件的鲁棒分数首次为正的日期
        relevant = set(truth.relevant_codes)
        events = [series for series in vectorize_events(dataset, "M01") if series.code in relevant]
        event_scores = np.max([robust_scores(series).as_array() for series in events], axis=0)
        event_onset = int(np.argmax(event_scores > 0))
        burst_start = dataset.span.index(machine.burst_start)
        assert 0 <= event_onset - burst_start <= 2

        # 传感器侧：对齐分数首次超过成簇之前最大值的 1.5 倍
        sensors = group_sensors(dataset, machine.label.robot, "M01")
        aligned = np.max([series.as_array() for series in sensor_score_series(sensors, dataset.span)], axis=0)
        threshold = 1.5 * aligned[:burst_start].max()
        assert (aligned > threshold).any()
        sensor_onset = int(np.argmax(aligned > threshold))
        assert sensor_onset >= dataset.span.index(machine.deviation_onset)

        assert spec.lead_days - 2 <= sensor_onset - event_onset <= spec.lead_days + 8

        # 偏离期间的传感器分数明显高于成簇之前
        onset = dataset.span.index(machine.deviation_onset)
        fault = dataset.span.index(machine.label.replacement_date)
        assert aligned[onset : fault + 1].mean() > 3 * aligned[:burst_start].mean()

    def test_null_scenario(self):
        """测试没有预埋事件时相关性报告中没有占优的事件"""
        dataset, truth = generate(build_spec(seed=1, n_relevant=0))
        _, aggregates = select_codes(dataset, "M01", truth.labels[0].robot)
        assert max(aggregates.values()) < 0.4


class TestRoundTrip:
    """写出后读取与内存数据一致"""

    def test_read_back(self, scenario_dir, small_scenario):
        """测试 CSV 往返后逐日计数相同"""
        dataset, truth = small_scenario
        logs = read_log_csv(scenario_dir / "logs.csv")
        sensors = read_sensor_csv(scenario_dir / "sensors.csv")
        assert logs.errors == [] and sensors.errors == []

        restored = build_dataset(logs.records, sensors.records)
        assert restored.span == dataset.span
        assert restored.logs == dataset.logs
        assert restored.sensors == dataset.sensors
        for machine in dataset.machines:
            assert vectorize_events(restored, machine) == vectorize_events(dataset, machine)
        assert read_labels_csv(scenario_dir / "labels.csv") == truth.labels

    def test_truth_json(self, scenario_dir, small_truth):
        """测试真值 JSON"""
        restored = GroundTruth.model_validate_json((scenario_dir / "truth.json").read_text(encoding="utf-8"))
        assert restored == small_truth


class TestConservation:
    """守恒测试"""

    def test_counts_conserved(self, small_scenario):
        """测试逐日计数之和等于记录数，矩阵列和等于事件总数"""
        dataset, _ = small_scenario
        for machine in dataset.machines:
            expected = Counter(record.code for record in dataset.logs if record.machine == machine)
            events = vectorize_events(dataset, machine)
            assert {series.code: series.total for series in events} == dict(expected)

            matrix = build_count_matrix(events, all_codes_selection(events), dataset.span)
            column_sums = matrix.as_array().sum(axis=0)
            assert column_sums.tolist() == [float(expected[code]) for code in matrix.codes]


@pytest.mark.slow
class TestPlantedRecovery:
    """预埋事件的召回"""

    def test_recall_over_seeds(self):
        """测试 20 个渐变场景的平均召回率不低于 0.9，等规模随机选择不高于 0.25"""
        recalls, baselines = [], []
        relevant_tau, other_tau = [], []
        for seed in range(20):
            spec = build_spec(seed=seed, n_codes=300, n_relevant=10, fault_kind=FaultKind.GRADUAL)
            dataset, truth = generate(spec)
            selected, aggregates = select_codes(dataset, "M01", truth.labels[0].robot)
            planted = set(truth.relevant_codes)
            recalls.append(len(planted & set(selected)) / len(planted))

            rng = np.random.default_rng(1000 + seed)
            codes = sorted(aggregates)
            random_pick = set(rng.choice(codes, size=len(selected), replace=False))
            baselines.append(len(planted & random_pick) / len(planted))

            relevant_tau += [aggregates[code] for code in planted if code in aggregates]
            other_tau += [tau for code, tau in aggregates.items() if code not in planted]

        assert np.mean(recalls) >= 0.9
        assert np.mean(baselines) <= 0.25
        assert np.mean(relevant_tau) > np.mean(other_tau)


@pytest.mark.slow
class TestFleet:
    """12 台机器的对比"""

    def test_selected_not_worse_than_raw(self):
        """测试选择后特征的检出数不少于全部特征，且至少 10/12"""
        dataset, truth = generate(build_spec(seed=0, n_machines=12, fault_kind=FaultKind.MIXED))
        table = compare_pipelines(dataset, truth.labels, Settings())

        assert table.total == 12
        assert all(row.error is None for row in table.rows)
        assert table.detected_count("selected") >= table.detected_count("raw")
        assert table.detected_count("selected") >= 10
