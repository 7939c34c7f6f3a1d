import json
import logging
import os
from fractions import Fraction

import numpy as np
import pandas as pd

from .config import BASE_OUTPUT_PATH, JSON_SAFE_INT_BITS

logger = logging.getLogger(__name__)

_SAFE_LIMIT = 2**JSON_SAFE_INT_BITS


def ensure_directory(path: str):
    os.makedirs(path, exist_ok=True)


def json_safe(obj):
    """Integers beyond 53 bits become decimal strings, recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        n = int(obj)
        return str(n) if abs(n) >= _SAFE_LIMIT else n
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if hasattr(obj, "to_json"):
        return json_safe(obj.to_json())
    if hasattr(obj, "value"):  # enums
        return obj.value
    return obj


def dumps(record: dict) -> str:
    return json.dumps(json_safe(record), separators=(",", ":"), sort_keys=False)


def write_jsonl(records, stream) -> int:
    n = 0
    for record in records:
        stream.write(dumps(record) + "\n")
        n += 1
    return n


def write_table(df: pd.DataFrame, dataset_name: str, fmt: str = "parquet", base_path: str = BASE_OUTPUT_PATH) -> str:
    """Write a plot-ready table under base_path/dataset_name."""
    if df.empty:
        logger.warning("[%s] No rows to write.", dataset_name)
    out_dir = os.path.join(base_path, dataset_name)
    ensure_directory(out_dir)
    full_path = os.path.join(out_dir, f"{dataset_name}.{fmt}")
    if fmt == "parquet":
        df.to_parquet(full_path, index=False, engine="pyarrow")
    elif fmt == "csv":
        df.to_csv(full_path, index=False)
    else:
        raise ValueError(f"unknown table format {fmt!r}")
    logger.info("[%s] Written %d rows to %s.", dataset_name, len(df), full_path)
    return full_path
