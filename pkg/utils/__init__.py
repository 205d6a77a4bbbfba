from .json_parser import json_parser, canonical_json, content_hash
from .series import parse_series, read_series, format_series, write_text_atomic

__all__ = [
    "json_parser",
    "canonical_json",
    "content_hash",
    "parse_series",
    "read_series",
    "format_series",
    "write_text_atomic",
]
