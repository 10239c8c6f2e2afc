"""
Shared plumbing for the groupmap management commands.

Usage errors (bad flags, unreadable or malformed inputs) surface as a
CommandError with exit status 1; a non-finite objective during inference exits
with status 2.
"""

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import MapFormatError, NumericalError
from apps.lattice.models import LatticeDims

NUMERICAL_FAILURE = 2


class GroupmapCommand(BaseCommand):
    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # argparse would exit with status 2, which is reserved for numerical failures
        parser.called_from_command_line = False
        return parser

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except NumericalError as exc:
            raise CommandError(f"Numerical failure: {exc}", returncode=NUMERICAL_FAILURE) from exc
        except (MapFormatError, ValueError, OSError) as exc:
            raise CommandError(str(exc)) from exc

    def run(self, **options):
        raise NotImplementedError

    def success(self, message: str) -> None:
        self.stdout.write(self.style.SUCCESS(message))


def dims_argument(text: str) -> LatticeDims:
    return LatticeDims.parse(text)


def directory_argument(text: str) -> Path:
    return Path(text)
