"""
文件读写工具

所有输出均为 UTF-8、LF 换行，同样的输入总是得到逐字节相同的文件
"""

import hashlib
import json
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import BaseModel


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """写出 CSV（不含行索引）"""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return path


def write_json(payload: BaseModel | dict[str, Any] | list[Any], path: Path) -> Path:
    """写出 JSON，键排序且缩进固定"""
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def file_digest(path: Path) -> str:
    """文件的 SHA-256 摘要"""
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
