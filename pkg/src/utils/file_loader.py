"""
Report file utilities: JSON and CSV writers for flat result records.
Exact values (Fractions, sympy numbers) are rendered as strings.
"""

import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

RECORD_FIELDS = ["op", "kind", "q", "params", "value_numeric", "value_catalog", "rel_diff", "status"]


def _plain(value: Any) -> Any:
    """Convert a record value to something json can write."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if hasattr(value, "item"):
        # numpy scalar
        return value.item()
    return str(value)


def to_json_text(data: Any) -> str:
    return json.dumps(_plain(data), indent=2, ensure_ascii=False)


def save_json(data: Any, output_path: str) -> None:
    """
    Save a record (or list of records) as a JSON file.

    Args:
        data: Dictionary or list to save
        output_path: Path where JSON will be saved
    """
    directory = os.path.dirname(output_path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(output_path, 'w', encoding='utf-8') as f:
        f.write(to_json_text(data))
        f.write("\n")


def load_json(file_path: str) -> Any:
    """
    Load JSON file.

    Args:
        file_path: Path to JSON file

    Returns:
        Parsed JSON content
    """
    with open(file_path, 'r', encoding='utf-8') as f:
        return json.load(f)


def to_csv_text(records: List[Dict[str, Any]], fields: Optional[List[str]] = None) -> str:
    """
    Flatten records into CSV text.

    Business Logic:
    - Columns are the record schema fields, then any extra keys in first-seen order
    - Nested values (params) are written as compact JSON
    - Missing keys are written as empty cells
    """
    columns = list(fields or RECORD_FIELDS)
    for record in records:
        for key in record:
            if key not in columns:
                columns.append(key)

    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for record in records:
        row = {}
        for key in columns:
            value = _plain(record.get(key))
            if isinstance(value, (dict, list)):
                value = json.dumps(value, ensure_ascii=False, separators=(",", ":"))
            row[key] = "" if value is None else value
        writer.writerow(row)
    return buffer.getvalue()


def save_csv(records: List[Dict[str, Any]], output_path: str, fields: Optional[List[str]] = None) -> None:
    directory = os.path.dirname(output_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(output_path, 'w', encoding='utf-8', newline='') as f:
        f.write(to_csv_text(records, fields))


def write_records(records: Any, fmt: str = "json", out: Optional[str] = None) -> None:
    """
    Write records to a file path or standard output.

    Args:
        records: A record dict or a list of record dicts
        fmt: 'json' or 'csv'
        out: Output path; None writes to standard output
    """
    rows = records if isinstance(records, list) else [records]
    if fmt == "csv":
        text = to_csv_text(rows)
    elif fmt == "json":
        text = to_json_text(records) + "\n"
    else:
        raise ValueError(f"Unsupported report format: {fmt}")

    if out is None:
        sys.stdout.write(text)
        return
    if fmt == "csv":
        save_csv(rows, out)
    else:
        save_json(records, out)
