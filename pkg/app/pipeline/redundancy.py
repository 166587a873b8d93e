"""
冗余特征剔除模块

按相关性顺序贪心保留事件：与任一已保留事件的 |τ| 超过 rho 即视为冗余。
贪心保留数不足目标时，按相关性顺序从被剔除的事件中回填
"""

from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger

from app.core.config import RedundancySource, StdMode, TauVariant
from app.core.exceptions import EmptySelectionError, UnknownCodeError
from app.pipeline.detectors import robust_values
from app.pipeline.relevance import tau_coefficient
from app.schemas.selection import RedundancyDecision, SelectionResult, SelectionStage
from app.schemas.series import EventSeries
from app.utils.io import write_csv


def prune_redundant(
    selected: SelectionResult,
    events: list[EventSeries],
    target_count: int = 40,
    rho: float = 0.8,
    source: RedundancySource = RedundancySource.SCORES,
    std_mode: StdMode = StdMode.SAMPLE,
    variant: TauVariant = TauVariant.B,
) -> SelectionResult:
    """
    剔除冗余事件直到保留 target_count 个

    Args:
        selected: 相关性阶段的结果，按相关性降序
        events: 事件计数序列
        target_count: 目标保留数
        rho: |τ| 阈值
        source: 在鲁棒分数还是原始计数上计算 τ

    Returns:
        SelectionResult: stage=Redundancy，保留的事件仍按相关性顺序，附带每个事件的去留决策

    Raises:
        EmptySelectionError: 输入选择为空
        UnknownCodeError: 选中的事件码没有对应序列
    """
    if not selected.selected:
        raise EmptySelectionError()

    by_code = {series.code: series for series in events}
    arrays: dict[str, np.ndarray] = {}
    for code in selected.selected:
        if code not in by_code:
            raise UnknownCodeError(code)
        counts = by_code[code].as_array()
        arrays[code] = robust_values(counts, std_mode) if source == RedundancySource.SCORES else counts

    kept: list[str] = []
    dropped: list[str] = []
    decisions: dict[str, RedundancyDecision] = {}
    for code in selected.selected:
        if len(kept) >= target_count:
            decisions[code] = RedundancyDecision(code=code, kept=False, reason="not_reached")
            continue

        worst_tau, worst_code = 0.0, None
        for other in kept:
            tau = abs(tau_coefficient(arrays[code], arrays[other], variant))
            if tau > worst_tau:
                worst_tau, worst_code = tau, other

        if worst_tau > rho:
            dropped.append(code)
            decisions[code] = RedundancyDecision(
                code=code, kept=False, reason="redundant", max_abs_tau=worst_tau, against=worst_code
            )
        else:
            kept.append(code)
            decisions[code] = RedundancyDecision(
                code=code, kept=True, reason="kept", max_abs_tau=worst_tau, against=worst_code
            )

    # 回填：贪心保留数不足时按相关性顺序补回被剔除的事件
    for code in dropped[: max(0, target_count - len(kept))]:
        previous = decisions[code]
        decisions[code] = previous.model_copy(update={"kept": True, "reason": "refilled"})
        kept.append(code)

    kept_set = set(kept)
    ordered = [code for code in selected.selected if code in kept_set]
    logger.debug(f"Redundancy pruning kept {len(ordered)} of {len(selected.selected)} codes (rho={rho})")
    return SelectionResult(
        selected=ordered,
        threshold_used=rho,
        stage=SelectionStage.REDUNDANCY,
        decisions=[decisions[code] for code in selected.selected],
    )


def decisions_frame(result: SelectionResult) -> pd.DataFrame:
    rows = [
        (decision.code, decision.kept, decision.reason, decision.max_abs_tau, decision.against)
        for decision in result.decisions
    ]
    return pd.DataFrame(rows, columns=["code", "kept", "reason", "max_abs_tau", "against"])


def write_decisions_csv(result: SelectionResult, path: Path) -> Path:
    """导出去留决策，便于审计"""
    return write_csv(decisions_frame(result), path)
