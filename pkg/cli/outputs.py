"""
CSV / JSON writers for study results
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.9g"


def _significant(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isnan(value):
            return None
        return float(f"{value:.9g}")
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {k: _significant(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_significant(v) for v in value]
    return value


def write_table(
    rows: List[Dict[str, Any]],
    columns: Sequence[str],
    output_dir: Path,
    stem: str,
    fmt: str = "csv"
) -> Path:
    """
    Write records with a fixed column order

    Args:
        rows: Records keyed by column name
        columns: Column order
        output_dir: Target directory (created if missing)
        stem: File name without suffix
        fmt: "csv" or "json"

    Returns:
        Path of the written file
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(rows, columns=list(columns))
    if fmt == "csv":
        path = output_dir / f"{stem}.csv"
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    elif fmt == "json":
        path = output_dir / f"{stem}.json"
        records = [_significant(record) for record in frame.to_dict(orient="records")]
        with open(path, 'w') as f:
            json.dump(records, f, indent=2)
    else:
        raise ValueError(f"Unknown output format '{fmt}'")
    return path


def write_report(report: Dict[str, Any], output_dir: Path, stem: str) -> Path:
    """Write a JSON report"""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / f"{stem}.json"
    with open(path, 'w') as f:
        json.dump(_significant(report), f, indent=2)
    return path
