from __future__ import annotations

import logging
from typing import Any

from django.conf import settings
from django.core.management.base import CommandParser

from supercut.management.base import SupercutCommand
from supercut.netproto import serve


class Command(SupercutCommand):
    """Serve supergraph cuts to remote masters until interrupted."""

    help = "Start a worker that solves supergraph requests."

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--listen", default="127.0.0.1:7070", help="host:port to listen on.")
        parser.add_argument("--solver-threads", type=int, default=settings.SUPERCUT["SOLVER_THREADS"])
        parser.add_argument("--max-concurrent", type=int, default=settings.SUPERCUT["MAX_CONCURRENT"])
        parser.add_argument(
            "--log-level",
            choices=("DEBUG", "INFO", "WARNING", "ERROR"),
            help="Level of the `supercut` logger.",
        )

    def run(self, **options: Any) -> None:
        if options["log_level"]:
            logging.getLogger("supercut").setLevel(options["log_level"])
        serve(
            options["listen"],
            max_concurrent=options["max_concurrent"],
            solver_threads=options["solver_threads"],
        )
