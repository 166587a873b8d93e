"""
输入读取测试

覆盖日志、传感器与标签三张表的解析、错误报告与写出往返
"""

from datetime import date, datetime

import pytest

from app.core.exceptions import (
    BadTimestampError,
    EmptyDatasetError,
    EmptyFileError,
    MissingColumnError,
    MissingInputError,
    PositionOutOfRangeError,
)
from app.pipeline.ingest import (
    LogSchema,
    build_dataset,
    read_labels_csv,
    read_log_csv,
    read_sensor_csv,
    write_labels_csv,
    write_log_csv,
    write_sensor_csv,
)
from app.schemas.evaluation import FaultLabel
from app.schemas.records import Robot, Severity
from tests.helpers import LOG_HEADER, SENSOR_HEADER, log, sensor, write_text


class TestReadLogCsv:
    """事件日志读取测试"""

    def test_table_row(self, tmp_path):
        """测试典型日志行"""
        path = write_text(tmp_path / "logs.csv", LOG_HEADER + "1,AA-BBBB,Low,description,2020-01-01 00:00:01\n")
        result = read_log_csv(path)

        assert result.errors == []
        assert len(result.records) == 1
        record = result.records[0]
        assert record.machine == "1"
        assert record.code == "AA-BBBB"
        assert record.severity == Severity.LOW
        assert record.detail == "description"
        assert record.timestamp == datetime(2020, 1, 1, 0, 0, 1)

    def test_header_only(self, tmp_path):
        """测试只有表头的文件得到空列表"""
        path = write_text(tmp_path / "logs.csv", LOG_HEADER)
        result = read_log_csv(path)
        assert result.records == []
        assert result.errors == []

    def test_unknown_severity_kept(self, tmp_path):
        """测试未知严重级别映射为 Unknown 且记录保留"""
        path = write_text(tmp_path / "logs.csv", LOG_HEADER + "1,AA-BBBB,Critical,x,2020-01-01 00:00:01\n")
        result = read_log_csv(path)
        assert result.records[0].severity == Severity.UNKNOWN

    def test_bad_timestamp_reported(self, tmp_path):
        """测试无法解析的时间戳进入错误报告，其余行保留"""
        path = write_text(
            tmp_path / "logs.csv",
            LOG_HEADER + "1,A,Low,x,2020-01-01 00:00:01\n1,B,Low,x,yesterday\n1,C,Low,x,2020-01-02 10:00:00\n",
        )
        result = read_log_csv(path)

        assert [record.code for record in result.records] == ["A", "C"]
        assert len(result.errors) == 1
        assert result.errors[0].row == 2
        assert result.errors[0].code == 2002

    def test_bad_timestamp_strict(self, tmp_path):
        """测试严格模式下第一处错误即抛出"""
        path = write_text(tmp_path / "logs.csv", LOG_HEADER + "1,B,Low,x,yesterday\n")
        with pytest.raises(BadTimestampError):
            read_log_csv(path, strict=True)

    def test_missing_column(self, tmp_path):
        """测试缺少列"""
        path = write_text(tmp_path / "logs.csv", "Machine,Code,DateTime\n1,A,2020-01-01 00:00:00\n")
        with pytest.raises(MissingColumnError) as exc_info:
            read_log_csv(path)
        assert exc_info.value.details["column"] == "Severity"

    def test_empty_file(self, tmp_path):
        """测试空文件"""
        path = write_text(tmp_path / "logs.csv", "")
        with pytest.raises(EmptyFileError):
            read_log_csv(path)

    def test_missing_file(self, tmp_path):
        """测试文件不存在"""
        with pytest.raises(MissingInputError):
            read_log_csv(tmp_path / "nope.csv")

    def test_custom_schema(self, tmp_path):
        """测试自定义列名映射"""
        path = write_text(tmp_path / "logs.csv", "m,c,s,d,t\n7,X,High,y,2021-05-05 12:00:00\n")
        schema = LogSchema(machine="m", code="c", severity="s", detail="d", timestamp="t")
        result = read_log_csv(path, schema=schema)
        assert result.records[0].machine == "7"
        assert result.records[0].severity == Severity.HIGH


class TestReadSensorCsv:
    """传感器数据读取测试"""

    def test_table_row(self, tmp_path):
        """测试典型传感器行"""
        path = write_text(tmp_path / "sensors.csv", SENSOR_HEADER + "Load,P_1,0.05,2020-01-01 00:00:00\n")
        record = read_sensor_csv(path).records[0]

        assert record.robot == Robot.LOAD
        assert record.position == 1
        assert record.value == 0.05
        assert record.timestamp == datetime(2020, 1, 1)
        assert record.machine is None

    def test_negative_value(self, tmp_path):
        """测试负值被接受"""
        path = write_text(tmp_path / "sensors.csv", SENSOR_HEADER + "Unload,P_3,-0.01,2020-01-01 00:00:00\n")
        record = read_sensor_csv(path).records[0]
        assert record.robot == Robot.UNLOAD
        assert record.position == 3
        assert record.value == -0.01

    def test_position_out_of_range(self, tmp_path):
        """测试位置超出声明的 K"""
        path = write_text(tmp_path / "sensors.csv", SENSOR_HEADER + "Load,P_9,0.1,2020-01-01 00:00:00\n")
        result = read_sensor_csv(path, num_positions=5)
        assert result.records == []
        assert result.errors[0].code == 2005

        with pytest.raises(PositionOutOfRangeError):
            read_sensor_csv(path, num_positions=5, strict=True)

    def test_bad_value(self, tmp_path):
        """测试无法解析的数值"""
        path = write_text(
            tmp_path / "sensors.csv",
            SENSOR_HEADER + "Load,P_1,abc,2020-01-01 00:00:00\nLoad,P_1,nan,2020-01-01 00:00:00\n",
        )
        result = read_sensor_csv(path)
        assert result.records == []
        assert [error.code for error in result.errors] == [2003, 2003]

    def test_bad_robot(self, tmp_path):
        """测试未知机器人"""
        path = write_text(tmp_path / "sensors.csv", SENSOR_HEADER + "Arm,P_1,0.1,2020-01-01 00:00:00\n")
        assert read_sensor_csv(path).errors[0].code == 2003

    def test_machine_column(self, tmp_path):
        """测试可选的 Machine 列"""
        path = write_text(
            tmp_path / "sensors.csv",
            "Robot,Position,Value,DateTime,Machine\nLoad,1,0.1,2020-01-01 00:00:00,M01\nLoad,2,0.2,2020-01-01 00:00:00,\n",
        )
        records = read_sensor_csv(path).records
        assert records[0].machine == "M01"
        assert records[1].machine is None


class TestBuildDataset:
    """数据集组装测试"""

    def test_span_covers_both_tables(self):
        """测试区间取两张表的最早与最晚日期"""
        logs = [log("1", "A", "2020-01-01 08:00:00"), log("1", "A", "2020-01-10 08:00:00")]
        sensors = [
            sensor(Robot.LOAD, 1, 0.1, "2020-01-03 00:00:00"),
            sensor(Robot.LOAD, 1, 0.1, "2020-01-12 23:59:59"),
        ]
        dataset = build_dataset(logs, sensors)
        assert dataset.span.first == date(2020, 1, 1)
        assert dataset.span.last == date(2020, 1, 12)

    def test_single_record(self):
        """测试单条记录的区间"""
        dataset = build_dataset([log("1", "A", "2020-03-04 05:06:07")], [])
        assert dataset.span.first == dataset.span.last == date(2020, 3, 4)

    def test_machines(self):
        """测试机器集合"""
        logs = [log(machine, "A", "2020-01-01 00:00:00") for machine in ("3", "1", "2", "1")]
        assert build_dataset(logs, []).machines == ["1", "2", "3"]

    def test_empty(self):
        """测试空数据集"""
        with pytest.raises(EmptyDatasetError):
            build_dataset([], [])


class TestLabels:
    """故障标签测试"""

    def test_read_labels(self, tmp_path):
        """测试读取标签"""
        path = write_text(
            tmp_path / "labels.csv",
            "machine,robot,fault_kind,replacement_date\nM01,Load,GF_1,2020-04-10\nM02,unload,SF_1,2020-04-11\n",
        )
        labels = read_labels_csv(path)
        assert labels[0] == FaultLabel(
            machine="M01", robot=Robot.LOAD, fault_kind="GF_1", replacement_date=date(2020, 4, 10)
        )
        assert labels[1].robot == Robot.UNLOAD

    def test_bad_date(self, tmp_path):
        """测试无法解析的更换日期"""
        path = write_text(tmp_path / "labels.csv", "machine,robot,fault_kind,replacement_date\nM01,Load,GF_1,soon\n")
        with pytest.raises(BadTimestampError):
            read_labels_csv(path)


class TestRoundTrip:
    """写出后重新读取得到相同记录"""

    def test_logs(self, tmp_path):
        """测试日志往返"""
        records = [log("1", "AA-BBBB", "2020-01-01 00:00:01"), log("2", "CC-DDDD", "2020-01-02 13:14:15")]
        path = write_log_csv(records, tmp_path / "logs.csv")
        assert read_log_csv(path).records == records

    def test_sensors(self, tmp_path):
        """测试传感器往返（浮点数无损）"""
        records = [
            sensor(Robot.LOAD, 1, 0.1 + 0.2, "2020-01-01 00:00:01", machine="M01"),
            sensor(Robot.UNLOAD, 4, -1e-7, "2020-01-02 00:00:00", machine="M02"),
        ]
        path = write_sensor_csv(records, tmp_path / "sensors.csv")
        assert read_sensor_csv(path).records == records

    def test_labels(self, tmp_path):
        """测试标签往返"""
        labels = [FaultLabel(machine="M01", robot=Robot.LOAD, fault_kind="GF_1", replacement_date=date(2020, 4, 10))]
        path = write_labels_csv(labels, tmp_path / "labels.csv")
        assert read_labels_csv(path) == labels
