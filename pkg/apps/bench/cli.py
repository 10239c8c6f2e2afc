"""
The ``groupmap`` console script.

Dispatches to the management commands and maps the outcome to an exit status:
0 on success, 1 on usage errors, 2 on numerical failures.
"""

import os
import sys

from django.core.management.base import CommandError


def cli_main(argv: list[str] | None = None) -> int:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.base")
    from django.core.management import execute_from_command_line

    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        execute_from_command_line(["groupmap", *argv])
    except CommandError as exc:
        # raised while parsing a subcommand's arguments
        sys.stderr.write(f"{exc}\n")
        return 1
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0


def main() -> None:
    sys.exit(cli_main())
