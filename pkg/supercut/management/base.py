from __future__ import annotations

from typing import Any

from django.core.management import BaseCommand, CommandError

from supercut.utils.exceptions import SupercutError


class SupercutCommand(BaseCommand):
    """
    Base class for the app's commands.

    Subclasses implement `run` instead of `handle`, any `SupercutError` it raises
    ends the command with a non-zero exit code and the error's message.
    """

    def handle(self, *args: Any, **options: Any) -> None:
        try:
            self.run(**options)
        except SupercutError as exc:
            raise CommandError(str(exc)) from exc

    def run(self, **options: Any) -> None:
        raise NotImplementedError
