from __future__ import annotations

from django.apps import AppConfig


class SupercutAppConfig(AppConfig):
    name = "supercut"

    def ready(self) -> None:
        import supercut.checks  # noqa: F401 pylint: disable=import-outside-toplevel,unused-import
