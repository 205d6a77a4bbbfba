import csv
import io
import tempfile
from pathlib import Path
from typing import Iterable, Tuple

import numpy as np

from transport.errors import ParseError

HEADER = ["t", "y"]


def parse_series(text: str, source: str = "<series>", allow_duplicates: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Parse a ``t,y`` CSV (header required) into two float arrays, keeping row order."""
    rows = csv.reader(io.StringIO(text))
    header = next(rows, None)
    if header is None or [h.strip() for h in header] != HEADER:
        raise ParseError(f"{source}: line 1: expected header 't,y', got {header!r}")
    t, y, seen = [], [], set()
    for line, row in enumerate(rows, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"{source}: line {line}: expected 2 columns, got {len(row)}")
        try:
            ti, yi = float(row[0]), float(row[1])
        except ValueError as err:
            raise ParseError(f"{source}: line {line}: {err}") from err
        if not (np.isfinite(ti) and np.isfinite(yi)):
            raise ParseError(f"{source}: line {line}: values must be finite")
        if ti in seen and not allow_duplicates:
            raise ParseError(f"{source}: line {line}: duplicate input t={ti:g}")
        seen.add(ti)
        t.append(ti)
        y.append(yi)
    if not t:
        raise ParseError(f"{source}: no data rows")
    return np.array(t), np.array(y)


def read_series(path: str | Path, allow_duplicates: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"Series file not found: {path}")
    return parse_series(path.read_text(encoding="utf-8"), str(path), allow_duplicates)


def format_series(t: Iterable[float], y: Iterable[float]) -> str:
    lines = [",".join(HEADER)]
    lines.extend(f"{ti:.17g},{yi:.17g}" for ti, yi in zip(t, y))
    return "\n".join(lines) + "\n"


def write_text_atomic(path: str | Path, text: str):
    """Write through a sibling temp file and rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", dir=path.parent, prefix=f".{path.name}.", suffix=".tmp", delete=False
    ) as tmp:
        tmp.write(text)
    try:
        Path(tmp.name).replace(path)
    except OSError:
        Path(tmp.name).unlink(missing_ok=True)
        raise
