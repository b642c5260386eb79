from __future__ import annotations

from typing import Any

from django.core.management import CommandError
from django.core.management.base import CommandParser

from supercut.harness import SWEEPS, verify
from supercut.management.base import SupercutCommand


class Command(SupercutCommand):
    """Run the differential checks, and fail if any case disagrees."""

    help = "Check the solvers against the oracle, brute force and each other."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument(
            "--remote",
            nargs="*",
            default=[],
            metavar="HOST:PORT",
            help="Workers to compare against local solves.",
        )
        parser.add_argument("--only", nargs="*", default=[], choices=sorted(SWEEPS))
        parser.add_argument("--cases", type=int, help="Cases per check instead of the defaults.")

    def run(self, **options: Any) -> None:
        sweeps = verify(
            options["seed"], endpoints=options["remote"], only=options["only"], cases=options["cases"]
        )
        for sweep in sweeps:
            self.stdout.write(str(sweep))
            for failure in sweep.failures:
                self.stdout.write(f"  {failure}")
        if failed := [sweep.name for sweep in sweeps if not sweep.ok]:
            raise CommandError(f"Failed checks: {', '.join(failed)}")
