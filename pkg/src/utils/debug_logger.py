"""
Debug logging utility for verification runs.
Captures one structured JSON file per stage for later inspection.
"""

import json
import re
import traceback
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List

from utils.file_loader import to_json_text


class DebugLogger:
    """
    Stage-by-stage debug logger.
    Creates <output_dir>/debug_logs/<run_name>/ with numbered JSON files.
    """

    def __init__(self, output_dir: str, run_name: str, enabled: bool = True):
        """
        Initialize debug logger.

        Args:
            output_dir: Base output directory
            run_name: Name of the run (command and suite)
            enabled: Whether logging is enabled
        """
        self.enabled = enabled
        self.stage_count = 0
        if not enabled:
            return

        safe_name = re.sub(r"[^A-Za-z0-9_.-]+", "_", run_name).strip("_") or "run"
        self.debug_dir = Path(output_dir) / "debug_logs" / safe_name
        self.debug_dir.mkdir(parents=True, exist_ok=True)

        self.metadata = {
            "run_name": run_name,
            "timestamp": datetime.now().isoformat(),
            "config": {},
            "stages": {},
        }

    def log_config(self, config: Dict[str, Any]):
        """Record the run configuration in the metadata."""
        if not self.enabled:
            return
        self.metadata["config"] = dict(config)

    def log_stage(self, stage: str, rows: List[Dict[str, Any]]):
        """
        Write the rows produced by one stage.

        Args:
            stage: Stage name, e.g. "identities"
            rows: Report records of the stage
        """
        if not self.enabled:
            return

        self.stage_count += 1
        passed = sum(1 for r in rows if r.get("status") in ("pass", "info"))
        log_file = self.debug_dir / f"{self.stage_count:02d}_{stage}.json"
        with open(log_file, 'w', encoding='utf-8') as f:
            f.write(to_json_text({
                "stage": stage,
                "timestamp": datetime.now().isoformat(),
                "rows": rows,
                "rows_passed": passed,
                "total_rows": len(rows),
            }))

        self.metadata["stages"][stage] = {
            "rows_passed": passed,
            "total_rows": len(rows),
        }

    def log_result(self, stage: str, result: Any):
        """Write a single result record (transform, solve) as a stage."""
        if not self.enabled:
            return
        self.log_stage(stage, result if isinstance(result, list) else [result])

    def save_metadata(self):
        """Save run metadata summary."""
        if not self.enabled:
            return

        metadata_file = self.debug_dir / "00_metadata.json"
        with open(metadata_file, 'w', encoding='utf-8') as f:
            json.dump(self.metadata, f, indent=2, ensure_ascii=False, default=str)

    def log_error(self, stage: str, error: Exception):
        """
        Log error that occurred during a run.

        Args:
            stage: Stage where error occurred
            error: Exception object
        """
        if not self.enabled:
            return

        error_file = self.debug_dir / "ERROR.txt"
        with open(error_file, 'a', encoding='utf-8') as f:
            f.write("=" * 80 + "\n")
            f.write(f"ERROR in {stage}\n")
            f.write("=" * 80 + "\n")
            f.write(f"Timestamp: {datetime.now().isoformat()}\n")
            f.write(f"Error Type: {type(error).__name__}\n")
            f.write(f"Error Message: {str(error)}\n")
            f.write("-" * 80 + "\n\n")
            f.write("Traceback:\n")
            f.write("".join(traceback.format_exception(type(error), error, error.__traceback__)))
            f.write("\n" + "=" * 80 + "\n\n")
