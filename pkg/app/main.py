"""
命令行主入口

提供子命令注册、配置加载和统一的异常处理
"""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Annotated, Any

import typer
from loguru import logger

from app.cli import commands
from app.core.config import Aggregation, EvalSpan, RedundancySource, Settings, StdMode, TauVariant, load_settings
from app.core.exceptions import UsageException, create_error_report, exit_code_for
from app.middleware.logging import setup_logging
from app.schemas.records import Robot
from app.schemas.report import BaseResponse
from app.schemas.synth import FaultKind
from app.utils.io import write_json

app = typer.Typer(
    name="logsel",
    help="日志事件特征选择：向量化、相关性选择、冗余剔除、KNN 检测与评估",
    no_args_is_help=True,
    add_completion=False,
)

# ==================== 公共参数 ====================

ConfigOpt = Annotated[Path | None, typer.Option("--config", "-c", help="KEY=VALUE 配置文件")]
OutputOpt = Annotated[Path | None, typer.Option("--output-dir", "-o", help="输出目录")]
LogsOpt = Annotated[Path | None, typer.Option("--logs", help="事件日志 CSV")]
SensorsOpt = Annotated[Path | None, typer.Option("--sensors", help="传感器数据 CSV")]
LabelsOpt = Annotated[Path | None, typer.Option("--labels", help="故障标签 CSV")]
SelectionOpt = Annotated[Path | None, typer.Option("--selection", help="select 输出的 selection.json")]
MachineOpt = Annotated[str | None, typer.Option("--machine", help="机器标识，默认第一台")]
RobotOpt = Annotated[Robot | None, typer.Option("--robot", case_sensitive=False, help="机器人")]
SpanStartOpt = Annotated[str | None, typer.Option("--span-start", help="分析区间起点 YYYY-MM-DD")]
SpanEndOpt = Annotated[str | None, typer.Option("--span-end", help="分析区间终点 YYYY-MM-DD")]
PositionsOpt = Annotated[int | None, typer.Option("--positions", help="传感器位置数 K")]
FractionOpt = Annotated[float | None, typer.Option("--fraction", help="相关性阶段保留比例")]
TargetOpt = Annotated[int | None, typer.Option("--target-count", help="冗余剔除后的目标特征数")]
RhoOpt = Annotated[float | None, typer.Option("--rho", help="冗余阈值 |τ|")]
StdModeOpt = Annotated[StdMode | None, typer.Option("--std-mode", help="标准差口径")]
TauOpt = Annotated[TauVariant | None, typer.Option("--tau-variant", help="Kendall τ 变体")]
AggregationOpt = Annotated[Aggregation | None, typer.Option("--aggregation", help="跨位置聚合方式")]
SourceOpt = Annotated[RedundancySource | None, typer.Option("--redundancy-source", help="冗余 τ 的序列来源")]
KOpt = Annotated[int | None, typer.Option("--k", help="KNN 的 k")]
WindowOpt = Annotated[int | None, typer.Option("--window", help="检出窗口 W（天）")]
EvalSpanOpt = Annotated[EvalSpan | None, typer.Option("--eval-span", help="评估评分区间")]
NoSelectionOpt = Annotated[bool, typer.Option("--no-selection", help="只评估全部特征")]
SensorArmOpt = Annotated[bool, typer.Option("--sensor-arm", help="增加只用传感器的对比分支")]
StrictOpt = Annotated[bool, typer.Option("--strict", help="任一行解析失败即退出")]
WorkersOpt = Annotated[int | None, typer.Option("--workers", help="并行线程数")]
LogLevelOpt = Annotated[str | None, typer.Option("--log-level", help="日志级别")]
LogFileOpt = Annotated[Path | None, typer.Option("--log-file", help="日志文件，按大小轮转")]
SetOpt = Annotated[
    list[str] | None, typer.Option("--set", "-S", metavar="KEY=VALUE", help="覆盖任意配置项（可重复）")
]


def parse_set_values(values: list[str] | None) -> dict[str, str]:
    """
    解析 --set KEY=VALUE

    Raises:
        UsageException: 格式错误或未知的配置项
    """
    overrides: dict[str, str] = {}
    for item in values or []:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageException(f"--set 需要 KEY=VALUE 格式: {item!r}")
        if key not in Settings.model_fields:
            raise UsageException(f"未知的配置项: {key}", details={"key": key})
        overrides[key] = value.strip()
    return overrides


def _flag(enabled: bool, value: Any) -> Any:
    """开关型参数：未给出时视为未指定，交给配置文件与默认值"""
    return value if enabled else None


def execute(
    command: str,
    config: Path | None,
    options: dict[str, Any],
    set_values: list[str] | None,
    handler: Callable[[Settings], list[Path]],
) -> None:
    """
    加载配置、运行子命令并把异常转换为错误报告与退出码

    成功时在标准输出打印 JSON 结果；失败时写出 error.json 并打印到标准错误
    """
    output_dir = options.get("OUTPUT_DIR") or Path("output")
    try:
        overrides = {**parse_set_values(set_values), **{k: v for k, v in options.items() if v is not None}}
        settings = load_settings(config, **overrides)
        output_dir = settings.OUTPUT_DIR
        setup_logging(settings.LOG_LEVEL, settings.LOG_FILE)
        response = commands.run_command(command, settings, lambda: handler(settings))
    except Exception as e:
        report = create_error_report(e)
        _write_error_report(report, output_dir)
        typer.echo(report.model_dump_json(), err=True)
        raise typer.Exit(code=exit_code_for(e)) from e

    typer.echo(json.dumps(response.model_dump(mode="json"), ensure_ascii=False, sort_keys=True))


def _write_error_report(report: BaseResponse[dict[str, Any]], output_dir: Path) -> None:
    try:
        write_json(report, output_dir / "error.json")
    except OSError as e:
        logger.warning(f"⚠️  无法写出错误报告: {e}")


# ==================== 子命令 ====================


@app.command("vectorize")
def vectorize(
    config: ConfigOpt = None,
    output_dir: OutputOpt = None,
    logs: LogsOpt = None,
    machine: MachineOpt = None,
    span_start: SpanStartOpt = None,
    span_end: SpanEndOpt = None,
    strict: StrictOpt = False,
    log_level: LogLevelOpt = None,
    log_file: LogFileOpt = None,
    set_values: SetOpt = None,
) -> None:
    """按天统计每个事件码的触发次数"""
    options = {
        "OUTPUT_DIR": output_dir,
        "LOG_CSV": logs,
        "MACHINE": machine,
        "SPAN_START": span_start,
        "SPAN_END": span_end,
        "STRICT_INGEST": _flag(strict, True),
        "LOG_LEVEL": log_level,
        "LOG_FILE": log_file,
    }
    execute("vectorize", config, options, set_values, commands.cmd_vectorize)


@app.command("select")
def select(
    config: ConfigOpt = None,
    output_dir: OutputOpt = None,
    logs: LogsOpt = None,
    sensors: SensorsOpt = None,
    machine: MachineOpt = None,
    robot: RobotOpt = None,
    span_start: SpanStartOpt = None,
    span_end: SpanEndOpt = None,
    positions: PositionsOpt = None,
    fraction: FractionOpt = None,
    target_count: TargetOpt = None,
    rho: RhoOpt = None,
    std_mode: StdModeOpt = None,
    tau_variant: TauOpt = None,
    aggregation: AggregationOpt = None,
    redundancy_source: SourceOpt = None,
    strict: StrictOpt = False,
    workers: WorkersOpt = None,
    log_level: LogLevelOpt = None,
    log_file: LogFileOpt = None,
    set_values: SetOpt = None,
) -> None:
    """选择与传感器异常相关且互不冗余的事件"""
    options = {
        "OUTPUT_DIR": output_dir,
        "LOG_CSV": logs,
        "SENSOR_CSV": sensors,
        "MACHINE": machine,
        "ROBOT": robot,
        "SPAN_START": span_start,
        "SPAN_END": span_end,
        "NUM_POSITIONS": positions,
        "FRACTION": fraction,
        "TARGET_COUNT": target_count,
        "RHO": rho,
        "STD_MODE": std_mode,
        "TAU_VARIANT": tau_variant,
        "AGGREGATION": aggregation,
        "REDUNDANCY_SOURCE": redundancy_source,
        "STRICT_INGEST": _flag(strict, True),
        "WORKERS": workers,
        "LOG_LEVEL": log_level,
        "LOG_FILE": log_file,
    }
    execute("select", config, options, set_values, commands.cmd_select)


@app.command("detect")
def detect(
    config: ConfigOpt = None,
    output_dir: OutputOpt = None,
    logs: LogsOpt = None,
    selection: SelectionOpt = None,
    machine: MachineOpt = None,
    span_start: SpanStartOpt = None,
    span_end: SpanEndOpt = None,
    k: KOpt = None,
    strict: StrictOpt = False,
    log_level: LogLevelOpt = None,
    log_file: LogFileOpt = None,
    set_values: SetOpt = None,
) -> None:
    """在计数矩阵上运行 KNN 异常检测"""
    options = {
        "OUTPUT_DIR": output_dir,
        "LOG_CSV": logs,
        "SELECTION_JSON": selection,
        "MACHINE": machine,
        "SPAN_START": span_start,
        "SPAN_END": span_end,
        "KNN_K": k,
        "STRICT_INGEST": _flag(strict, True),
        "LOG_LEVEL": log_level,
        "LOG_FILE": log_file,
    }
    execute("detect", config, options, set_values, commands.cmd_detect)


@app.command("evaluate")
def evaluate(
    config: ConfigOpt = None,
    output_dir: OutputOpt = None,
    logs: LogsOpt = None,
    sensors: SensorsOpt = None,
    labels: LabelsOpt = None,
    positions: PositionsOpt = None,
    fraction: FractionOpt = None,
    target_count: TargetOpt = None,
    rho: RhoOpt = None,
    k: KOpt = None,
    window: WindowOpt = None,
    eval_span: EvalSpanOpt = None,
    no_selection: NoSelectionOpt = False,
    sensor_arm: SensorArmOpt = False,
    strict: StrictOpt = False,
    workers: WorkersOpt = None,
    log_level: LogLevelOpt = None,
    log_file: LogFileOpt = None,
    set_values: SetOpt = None,
) -> None:
    """对每台有标签的机器比较全部特征与选择后特征的检出情况"""
    options = {
        "OUTPUT_DIR": output_dir,
        "LOG_CSV": logs,
        "SENSOR_CSV": sensors,
        "LABELS_CSV": labels,
        "NUM_POSITIONS": positions,
        "FRACTION": fraction,
        "TARGET_COUNT": target_count,
        "RHO": rho,
        "KNN_K": k,
        "WINDOW_DAYS": window,
        "EVAL_SPAN": eval_span,
        "SELECTION_ENABLED": _flag(no_selection, False),
        "SENSOR_ARM": _flag(sensor_arm, True),
        "STRICT_INGEST": _flag(strict, True),
        "WORKERS": workers,
        "LOG_LEVEL": log_level,
        "LOG_FILE": log_file,
    }
    execute("evaluate", config, options, set_values, commands.cmd_evaluate)


@app.command("synth")
def synth(
    config: ConfigOpt = None,
    output_dir: OutputOpt = None,
    seed: Annotated[int | None, typer.Option("--seed", help="随机数种子")] = None,
    machines: Annotated[int | None, typer.Option("--machines", help="机器数")] = None,
    days: Annotated[int | None, typer.Option("--days", help="天数")] = None,
    positions: Annotated[int | None, typer.Option("--positions", help="传感器位置数 K")] = None,
    codes: Annotated[int | None, typer.Option("--codes", help="事件码总数")] = None,
    relevant: Annotated[int | None, typer.Option("--relevant", help="预埋相关事件数")] = None,
    fault_kind: Annotated[FaultKind | None, typer.Option("--fault-kind", case_sensitive=False)] = None,
    fault_day: Annotated[int | None, typer.Option("--fault-day", help="更换日期相对起始日的偏移")] = None,
    lead_days: Annotated[int | None, typer.Option("--lead-days", help="相关事件领先传感器偏离的天数")] = None,
    noise_rate: Annotated[float | None, typer.Option("--noise-rate", help="无关事件日均触发次数")] = None,
    log_level: LogLevelOpt = None,
    log_file: LogFileOpt = None,
    set_values: SetOpt = None,
) -> None:
    """生成带预埋故障的合成数据集，场景参数对应 SYNTH_* 配置项"""
    options = {
        "OUTPUT_DIR": output_dir,
        "SEED": seed,
        "SYNTH_MACHINES": machines,
        "SYNTH_DAYS": days,
        "SYNTH_POSITIONS": positions,
        "SYNTH_CODES": codes,
        "SYNTH_RELEVANT": relevant,
        "SYNTH_FAULT_KIND": fault_kind,
        "SYNTH_FAULT_DAY": fault_day,
        "SYNTH_LEAD_DAYS": lead_days,
        "SYNTH_NOISE_RATE": noise_rate,
        "LOG_LEVEL": log_level,
        "LOG_FILE": log_file,
    }
    execute("synth", config, options, set_values, commands.cmd_synth)


@app.command("run-all")
def run_all(
    config: ConfigOpt = None,
    output_dir: OutputOpt = None,
    logs: LogsOpt = None,
    sensors: SensorsOpt = None,
    labels: LabelsOpt = None,
    machine: MachineOpt = None,
    robot: RobotOpt = None,
    positions: PositionsOpt = None,
    fraction: FractionOpt = None,
    target_count: TargetOpt = None,
    rho: RhoOpt = None,
    k: KOpt = None,
    window: WindowOpt = None,
    no_selection: NoSelectionOpt = False,
    strict: StrictOpt = False,
    workers: WorkersOpt = None,
    log_level: LogLevelOpt = None,
    log_file: LogFileOpt = None,
    set_values: SetOpt = None,
) -> None:
    """依次运行 vectorize、select、detect，提供标签时再运行 evaluate"""
    options = {
        "OUTPUT_DIR": output_dir,
        "LOG_CSV": logs,
        "SENSOR_CSV": sensors,
        "LABELS_CSV": labels,
        "MACHINE": machine,
        "ROBOT": robot,
        "NUM_POSITIONS": positions,
        "FRACTION": fraction,
        "TARGET_COUNT": target_count,
        "RHO": rho,
        "KNN_K": k,
        "WINDOW_DAYS": window,
        "SELECTION_ENABLED": _flag(no_selection, False),
        "STRICT_INGEST": _flag(strict, True),
        "WORKERS": workers,
        "LOG_LEVEL": log_level,
        "LOG_FILE": log_file,
    }
    execute("run-all", config, options, set_values, commands.run_all)


def main() -> None:
    """控制台脚本入口"""
    app()


if __name__ == "__main__":
    main()
