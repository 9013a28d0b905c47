"""Utility Functions"""

from .helpers import (
    to_jsonable,
    write_json,
    read_json,
    format_number,
    format_results,
    acceptance_table,
    parse_sweep,
)

__all__ = [
    "to_jsonable",
    "write_json",
    "read_json",
    "format_number",
    "format_results",
    "acceptance_table",
    "parse_sweep",
]
