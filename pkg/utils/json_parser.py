import re
import json
import hashlib
from pathlib import Path
from typing import Any


def json_parser(source: str) -> Any:
    """Parse JSON given inline (``{...}``) or as a path to a JSON file.

    Raises FileNotFoundError for a missing file and json.JSONDecodeError for bad JSON.
    """
    pattern = r"^\s*[\{\[]"
    if re.match(pattern, source):
        return json.loads(source)
    path = Path(source)
    if not path.is_file():
        raise FileNotFoundError(f"JSON file not found: {path}")
    return json.loads(path.read_text(encoding="utf-8"))


def canonical_json(payload: Any, indent: int | None = None) -> str:
    """Dump with stable key order so equal payloads give equal text."""
    if indent is None:
        return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return json.dumps(payload, sort_keys=True, indent=indent, allow_nan=False)


def content_hash(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()
