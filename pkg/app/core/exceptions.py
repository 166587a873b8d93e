"""
统一异常处理模块

提供自定义异常类和错误报告生成，实现统一的错误输出格式。
错误码 1xxx 为用法错误（退出码 1），2xxx 为数据错误（退出码 2）
"""

from typing import Any

from loguru import logger

from app.schemas.report import BaseResponse

EXIT_USAGE = 1
EXIT_DATA = 2


class AppException(Exception):
    """应用基础异常类"""

    def __init__(
        self,
        code: int,
        message: str,
        exit_code: int = EXIT_DATA,
        details: dict[str, Any] | None = None,
    ):
        self.code = code
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class UsageException(AppException):
    """参数或配置错误"""

    def __init__(self, message: str, details: dict[str, Any] | None = None, code: int = 1001):
        super().__init__(code=code, message=message, exit_code=EXIT_USAGE, details=details)


class DataException(AppException):
    """输入数据错误"""

    def __init__(self, message: str, details: dict[str, Any] | None = None, code: int = 2000):
        super().__init__(code=code, message=message, exit_code=EXIT_DATA, details=details)


# ==================== 用法错误 ====================


class BadFractionError(UsageException):
    """选择比例不在 (0, 1] 内"""

    def __init__(self, fraction: float):
        super().__init__(f"选择比例必须在 (0, 1] 内: {fraction}", {"fraction": fraction}, code=1002)


class KTooLargeError(UsageException):
    """KNN 的 k 不小于行数"""

    def __init__(self, k: int, rows: int):
        super().__init__(f"k={k} 必须小于行数 {rows}", {"k": k, "rows": rows}, code=1003)


class BadSpecError(UsageException):
    """合成场景参数不合法"""

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(f"场景参数不合法: {message}", details, code=1004)


class MissingInputError(UsageException):
    """缺少必需的输入文件"""

    def __init__(self, name: str, path: Any = None):
        super().__init__(f"缺少输入: {name}", {"input": name, "path": str(path) if path else None}, code=1005)


# ==================== 数据错误 ====================


class MissingColumnError(DataException):
    """表头缺少必需的列"""

    def __init__(self, name: str, path: Any = None):
        super().__init__(f"缺少列: {name}", {"column": name, "path": str(path) if path else None}, code=2001)


class BadTimestampError(DataException):
    """时间戳无法解析"""

    def __init__(self, row: int, text: str):
        super().__init__(f"第 {row} 行时间戳无法解析: {text!r}", {"row": row, "text": text}, code=2002)


class BadValueError(DataException):
    """数值无法解析"""

    def __init__(self, row: int, text: str):
        super().__init__(f"第 {row} 行数值无法解析: {text!r}", {"row": row, "text": text}, code=2003)


class EmptyFileError(DataException):
    """文件为空（没有表头）"""

    def __init__(self, path: Any):
        super().__init__(f"文件为空: {path}", {"path": str(path)}, code=2004)


class PositionOutOfRangeError(DataException):
    """传感器位置超出声明的 K"""

    def __init__(self, row: int, position: int, num_positions: int | None):
        super().__init__(
            f"第 {row} 行位置 P_{position} 超出范围 1..{num_positions}",
            {"row": row, "position": position, "num_positions": num_positions},
            code=2005,
        )


class EmptyDatasetError(DataException):
    """日志与传感器均无记录"""

    def __init__(self) -> None:
        super().__init__("数据集为空", code=2006)


class NoRecordsForMachineError(DataException):
    """指定机器在区间内没有日志"""

    def __init__(self, machine: str):
        super().__init__(f"机器 {machine} 在分析区间内没有日志记录", {"machine": machine}, code=2101)


class NoSensorDataError(DataException):
    """指定机器人没有传感器数据"""

    def __init__(self, robot: str, machine: str | None = None):
        super().__init__(
            f"机器人 {robot} 没有传感器数据", {"robot": robot, "machine": machine}, code=2102
        )


class TooShortError(DataException):
    """序列长度不足"""

    def __init__(self, length: int, minimum: int = 2):
        super().__init__(f"序列长度 {length} 小于 {minimum}", {"length": length, "minimum": minimum}, code=2201)


class SpanMismatchError(DataException):
    """两条序列的日期区间不一致"""

    def __init__(self, left: Any, right: Any):
        super().__init__(f"日期区间不一致: {left} != {right}", {"left": str(left), "right": str(right)}, code=2202)


class EmptyReportError(DataException):
    """相关性报告为空"""

    def __init__(self) -> None:
        super().__init__("相关性报告为空", code=2301)


class EmptySelectionError(DataException):
    """特征选择结果为空"""

    def __init__(self) -> None:
        super().__init__("特征选择结果为空", code=2401)


class UnknownCodeError(DataException):
    """选中的事件码不在事件序列中"""

    def __init__(self, code: str):
        super().__init__(f"未知的事件码: {code}", {"code": code}, code=2501)


class TooFewRowsError(DataException):
    """计数矩阵行数不足"""

    def __init__(self, rows: int):
        super().__init__(f"计数矩阵至少需要 2 行，当前 {rows} 行", {"rows": rows}, code=2601)


class DateOutOfRangeError(DataException):
    """更换日期不在评分区间内"""

    def __init__(self, day: Any):
        super().__init__(f"日期 {day} 不在评分区间内", {"day": str(day)}, code=2701)


class NoLabelsError(DataException):
    """标签文件中没有任何标签"""

    def __init__(self) -> None:
        super().__init__("没有故障标签", code=2702)


def create_error_report(exc: Exception) -> BaseResponse[dict[str, Any]]:
    """
    创建统一的错误报告

    Args:
        exc: 任意异常

    Returns:
        BaseResponse: success=False 的错误报告
    """
    if isinstance(exc, AppException):
        return BaseResponse(
            success=False,
            code=exc.code,
            msg=exc.message,
            err={"error_type": type(exc).__name__, **exc.details},
        )

    logger.exception(f"Unhandled exception: {exc}")
    return BaseResponse(
        success=False,
        code=2999,
        msg="内部错误",
        err={"error_type": type(exc).__name__, "detail": str(exc)},
    )


def exit_code_for(exc: Exception) -> int:
    """异常对应的进程退出码"""
    if isinstance(exc, AppException):
        return exc.exit_code
    return EXIT_DATA
