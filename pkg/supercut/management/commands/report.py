from __future__ import annotations

from pathlib import Path
from typing import Any

from django.core.management.base import CommandParser

from supercut.harness import describe_report, load_report
from supercut.management.base import SupercutCommand


class Command(SupercutCommand):
    """Summarize a report directory written by `run` again."""

    help = "Re-summarize the records of an earlier run."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--input", required=True, help="Report directory of an earlier run.")

    def run(self, **options: Any) -> None:
        for line in describe_report(load_report(Path(options["input"]))):
            self.stdout.write(line)
