from __future__ import annotations

from pathlib import Path
from typing import Any

from django.core.management.base import CommandParser

from supercut.harness import describe_report, export_report, load_config, run_benchmark
from supercut.management.base import SupercutCommand
from supercut.utils.constants import Mode, Policy


class Command(SupercutCommand):
    """Run a benchmark end to end and write its report."""

    help = "Solve all problems of a benchmark config and report the timings."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--config", help="YAML benchmark config, the settings' defaults otherwise.")
        parser.add_argument("--policy", choices=Policy.RUNNABLE, help="Overrides the config's policy.")
        parser.add_argument("--mode", choices=Mode.ALL, help="Overrides the config's mode.")
        parser.add_argument("--output", help="Report directory, the config's `output_dir` by default.")
        parser.add_argument(
            "--overlap",
            action="store_true",
            help="Score the segments against the ground truth of the synthetic images.",
        )

    def run(self, **options: Any) -> None:
        config = load_config(options["config"])
        changes: dict[str, Any] = {key: options[key] for key in ("policy", "mode") if options[key]}
        if options["output"]:
            changes["output_dir"] = Path(options["output"])
        config = config.replace(**changes)

        report = run_benchmark(config, with_overlap=options["overlap"])
        records, summary = export_report(report, config.output_dir)
        for line in describe_report(report):
            self.stdout.write(line)
        self.stdout.write(f"Wrote {records} and {summary}.")
