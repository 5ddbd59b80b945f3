"""Utility functions: parallel partitions, alist and JSON export, grid parsing."""

import asyncio
import json
import logging
import platform
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Sequence, TypeVar, Union

import numpy as np

from pg_qldpc.gf2 import BitMatrix

T = TypeVar("T")


##########################
# Parallel Utils
##########################

async def _gather_partitions(fn: Callable[..., T], arg_list: Sequence[tuple], jobs: int) -> list[T]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        tasks = [loop.run_in_executor(pool, fn, *args) for args in arg_list]
        return list(await asyncio.gather(*tasks))


def run_partitioned(fn: Callable[..., T], arg_list: Sequence[tuple], jobs: int = 1) -> list[T]:
    """Apply ``fn`` to every argument tuple, in order.

    With ``jobs > 1`` the calls run in a process pool; results are returned in
    submission order either way, so callers aggregate deterministically.
    """
    if jobs <= 1 or len(arg_list) <= 1:
        return [fn(*args) for args in arg_list]
    logging.debug(f"running {len(arg_list)} partitions on {jobs} workers")
    return asyncio.run(_gather_partitions(fn, arg_list, jobs))


##########################
# alist Utils
##########################

def matrix_to_alist(H: BitMatrix) -> str:
    """Serialize H in the alist format (1-based, zero-padded)."""
    n, m = H.n_cols, H.n_rows
    col_supports = [H.transpose().row_support(j) for j in range(n)]
    row_supports = [H.row_support(i) for i in range(m)]
    col_deg = [len(c) for c in col_supports]
    row_deg = [len(r) for r in row_supports]
    max_col = max(col_deg, default=0)
    max_row = max(row_deg, default=0)

    def padded(entries: list[int], width: int) -> str:
        """Render 1-based entries padded with zeros to width."""
        values = [e + 1 for e in entries] + [0] * (width - len(entries))
        return " ".join(str(v) for v in values)

    lines = [
        f"{n} {m}",
        f"{max_col} {max_row}",
        " ".join(str(d) for d in col_deg),
        " ".join(str(d) for d in row_deg),
    ]
    lines.extend(padded(c, max_col) for c in col_supports)
    lines.extend(padded(r, max_row) for r in row_supports)
    return "\n".join(lines) + "\n"


def alist_to_matrix(text: str) -> BitMatrix:
    """Parse an alist document; the row section must agree with the column section."""
    rows = [[int(tok) for tok in line.split()] for line in text.splitlines() if line.strip()]
    if len(rows) < 4:
        raise ValueError("Invalid alist format: missing header lines")
    n, m = rows[0][0], rows[0][1]
    col_deg, row_deg = rows[2], rows[3]
    if len(col_deg) != n or len(row_deg) != m or sum(col_deg) != sum(row_deg):
        raise ValueError("Invalid alist format: inconsistent degree profiles")
    if len(rows) != 4 + n + m:
        raise ValueError(f"Invalid alist format: expected {4 + n + m} lines, got {len(rows)}")

    supports: list[list[int]] = [[] for _ in range(m)]
    for j in range(n):
        for entry in rows[4 + j][: col_deg[j]]:
            if not 1 <= entry <= m:
                raise ValueError(f"Invalid alist format: column {j + 1} lists row {entry} outside 1..{m}")
            supports[entry - 1].append(j)
    for i in range(m):
        listed = sorted(e - 1 for e in rows[4 + n + i][: row_deg[i]])
        if listed != sorted(supports[i]):
            raise ValueError(f"Invalid alist format: row {i + 1} disagrees with the column section")
    return BitMatrix.from_supports(n, supports)


def write_alist(H: BitMatrix, path: Union[str, Path]) -> Path:
    """Write H to path in alist format."""
    target = Path(path)
    target.write_text(matrix_to_alist(H), encoding="utf-8")
    return target


def read_alist(path: Union[str, Path]) -> BitMatrix:
    """Read an alist file."""
    return alist_to_matrix(Path(path).read_text(encoding="utf-8"))


##########################
# Report Utils
##########################

def _json_default(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dump_json(payload: Any) -> str:
    """Render a report with sorted keys so identical inputs give identical bytes."""
    if hasattr(payload, "model_dump"):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"


def write_json(payload: Any, path: Union[str, Path]) -> Path:
    """Write a report as stable JSON."""
    target = Path(path)
    target.write_text(dump_json(payload), encoding="utf-8")
    return target


def stamp_metadata() -> dict[str, str]:
    """Return generation time and host details, attached only on request."""
    return {
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "python": platform.python_version(),
        "host": platform.node(),
    }


##########################
# Grid Utils
##########################

def parse_p_grid(text: str) -> list[float]:
    """Parse ``start:stop:count`` into ``count`` linearly spaced probabilities."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected start:stop:count, got {text!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("the grid needs at least one point")
    grid = np.linspace(start, stop, count).tolist()
    _check_probabilities(grid)
    return grid


def parse_p_list(text: str) -> list[float]:
    """Parse a comma-separated list of probabilities."""
    values = [float(tok) for tok in text.split(",") if tok.strip()]
    if not values:
        raise ValueError("the probability list is empty")
    _check_probabilities(values)
    return values


def _check_probabilities(values: Sequence[float]) -> None:
    for p in values:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
