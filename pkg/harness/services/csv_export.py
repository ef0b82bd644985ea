"""CSV export of reports with a stable column order."""

import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from django.conf import settings

from harness.exceptions import HarnessError
from harness.models import Report

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("id", "kind", "capacity", "method", "bound", "slack", "verdict", "h", "runtime")


def format_number(value: Optional[float]) -> str:
    """12 significant digits; empty for missing values."""
    if value is None:
        return ""
    return f"{value:.12g}"


def report_row(report: Report) -> Dict[str, str]:
    return {
        "id": report.scenario_id,
        "kind": report.kind,
        "capacity": format_number(report.capacity),
        "method": report.method,
        "bound": format_number(report.bound),
        "slack": format_number(report.slack),
        "verdict": report.verdict,
        "h": format_number(report.h),
        "runtime": format_number(report.runtime_seconds),
    }


def emit_csv(reports: Iterable[Report], path: Union[str, Path]) -> Path:
    """
    Write one row per report, ordered as given. Relative paths land in ``CAP_REPORT_DIR``.

    Raises:
        HarnessError: If there are no reports or the file cannot be written.
    """
    rows = [report_row(report) for report in reports]
    if not rows:
        raise HarnessError("No reports to export.")
    path = Path(path)
    if not path.is_absolute():
        path = Path(settings.CAP_REPORT_DIR) / path
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    except OSError as e:
        raise HarnessError(f"Cannot write CSV to {path}: {str(e)}")
    logger.info("Wrote %d report rows to %s", len(rows), path)
    return path


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    """
    Rows of an exported CSV as dicts of strings.

    Raises:
        HarnessError: If the file cannot be read or its header differs from ``CSV_COLUMNS``.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise HarnessError(f"{path} has columns {reader.fieldnames}, expected {list(CSV_COLUMNS)}")
            return list(reader)
    except OSError as e:
        raise HarnessError(f"Cannot read CSV {path}: {str(e)}")
