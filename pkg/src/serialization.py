"""
JSON summaries and CSV artifacts.

JSON floats use Python's shortest round-trip repr (never more than 17
significant digits) and non-finite values become null. CSV floats are
written with 17 significant digits.
"""

import csv
import json
import math
import logging
import os
import sys
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO

import numpy as np

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Convert numpy values, dataclasses and enums into plain JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if is_dataclass(value):
        return to_jsonable(asdict(value))
    return value


def dumps(document: Any) -> str:
    return json.dumps(to_jsonable(document), indent=2, allow_nan=False)


def write_json(document: Any, path: Optional[Path] = None, stream: Optional[TextIO] = None) -> None:
    """Write to `path` when given, else to `stream` (stdout by default)."""
    text = dumps(document)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
        logger.debug(f"Wrote {path}")
        return
    stream = stream or sys.stdout
    stream.write(text + "\n")
    stream.flush()


def _format(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % float(value)
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Header line plus one line per row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        count = 0
        for row in rows:
            writer.writerow([_format(v) for v in row])
            count += 1
    logger.info(f"Wrote {count} rows to {path}")
    return path


def read_csv(path: Path) -> tuple:
    """(columns, rows) with every cell parsed as float."""
    with Path(path).open(newline="") as f:
        reader = csv.reader(f)
        columns = next(reader)
        rows = [[float(cell) for cell in row] for row in reader]
    return columns, rows


def artifact_stem(name: str) -> str:
    """File-system safe stem for a check or case name ("bm/000" -> "bm_000")."""
    return name.replace("/", "_").replace(os.sep, "_")


# Column schemas
SUPPORT_COLUMNS = ("theta", "h")
RING_COLUMNS = ("theta", "t", "h")
GRADIENT_COLUMNS = ("theta", "grad_outer", "grad_inner")
MARGIN_COLUMNS = ("margin", "value", "tolerance", "within_tolerance")
QUANTITY_COLUMNS = ("quantity", "value")
