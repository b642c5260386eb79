from __future__ import annotations

from pathlib import Path
from typing import Any

from django.core.management.base import CommandParser

from supercut.harness import generate_files, load_config
from supercut.management.base import SupercutCommand


class Command(SupercutCommand):
    """Generate the synthetic problems of a benchmark config and write them to files."""

    help = "Generate synthetic segmentation problems."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--config", help="YAML benchmark config, the settings' defaults otherwise.")
        parser.add_argument(
            "--output", help="Directory for the problem files, `<output_dir>/problems` by default."
        )

    def run(self, **options: Any) -> None:
        config = load_config(options["config"])
        directory = Path(options["output"]) if options["output"] else config.output_dir / "problems"
        for path in generate_files(config, directory):
            self.stdout.write(str(path))
