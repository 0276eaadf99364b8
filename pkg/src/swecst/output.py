"""CSV snapshots of cell averages."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict

import numpy as np

from .errors import ConfigurationError


def snapshot_name(t: float) -> str:
    return f"solution_t{t:.10g}.csv"


def write_snapshot(path, fields: Dict[str, np.ndarray]):
    """One row per cell; columns in the order of ``fields``, ``%.17g``."""
    cols = list(fields)
    data = np.column_stack([np.asarray(fields[c], dtype=float).ravel() for c in cols])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in data:
            w.writerow(["%.17g" % v for v in row])


def read_snapshot(path) -> Dict[str, np.ndarray]:
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ConfigurationError(f"{path} is empty")
    head, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(head))
    return {c: data[:, k].copy() for k, c in enumerate(head)}
