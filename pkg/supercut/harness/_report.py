"""
Report files.

A report directory holds two files:

- `records.jsonl`: one JSON object per line with sorted keys. Task records have
  `kind: "task"`, the image, task and worker ids, the total slot count, start and
  finish seconds since the image's batch started, the `[problem, lambda index]`
  members of the task and one flow per member. Overlap records have
  `kind: "overlap"` and the best overlap of one problem's segments with the
  ground truth. Every record carries the `schema_version`.
- `summary.csv`: a header row, plus one row with the min / avg / max per-image
  wall time unless the run was empty.
"""
from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

from supercut.harness._run import RunReport
from supercut.types import JsonList
from supercut.utils.constants import Reports
from supercut.utils.exceptions import ReportError

logger = logging.getLogger(__name__)


def export_report(report: RunReport, directory: Path) -> tuple[Path, Path]:
    """
    Write the raw records and the summary of a report.

    Returns:
        The paths of the records and the summary file.

    Raises:
        ReportError: If the files can't be written.
    """
    records_path = directory / Reports.RECORDS_FILE
    summary_path = directory / Reports.SUMMARY_FILE
    try:
        directory.mkdir(parents=True, exist_ok=True)
        with open(records_path, "w", encoding="utf-8", newline="\n") as f:
            for record in report.records:
                line = json.dumps({**record, "schema_version": Reports.SCHEMA_VERSION}, sort_keys=True)
                f.write(line + "\n")
        with open(summary_path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(Reports.SUMMARY_HEADER)
            if (row := report.summary()) is not None:
                writer.writerow(row[column] for column in Reports.SUMMARY_HEADER)
    except OSError as exc:
        raise ReportError(directory, exc) from exc
    logger.info(f"Wrote {len(report.records)} records to {records_path}.")
    return records_path, summary_path


def load_report(directory: Path) -> RunReport:
    """
    Read a report back from its directory.

    Raises:
        ReportError: If the files are missing, unreadable or of another schema version.
    """
    try:
        with open(directory / Reports.SUMMARY_FILE, encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        with open(directory / Reports.RECORDS_FILE, encoding="utf-8") as f:
            records: JsonList = [json.loads(line) for line in f if line.strip()]
    except (OSError, ValueError) as exc:
        raise ReportError(directory, exc) from exc

    for record in records:
        if record.pop("schema_version", None) != Reports.SCHEMA_VERSION:
            raise ReportError(directory, f"a record is not of schema version {Reports.SCHEMA_VERSION}")
    row = rows[0] if rows else {"label": "", "policy": "", "mode": "", "images": "0"}
    return RunReport.from_records(
        records,
        label=row["label"],
        policy=row["policy"],
        mode=row["mode"],
        images=int(row["images"]),
    )


def describe_report(report: RunReport) -> list[str]:
    """Human readable lines about a report."""
    summary = report.summary()
    if summary is None:
        return ["No tasks ran."]
    makespans = sorted(report.policy_makespans().items())
    lines = [
        f"{summary['label']} {summary['policy']}/{summary['mode']}: {summary['tasks']} tasks over "
        f"{summary['images']} images, min {summary['min_s']:.3f} s, avg {summary['avg_s']:.3f} s, "
        f"max {summary['max_s']:.3f} s",
        ", ".join(f"{policy} {makespan:.3f} s" for policy, makespan in makespans),
    ]
    if overlaps := report.overlaps():
        mean = sum(overlaps.values()) / len(overlaps)
        lines.append(f"mean best overlap {mean:.3f} over {len(overlaps)} problems")
    return lines
