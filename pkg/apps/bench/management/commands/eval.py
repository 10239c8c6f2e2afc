"""
Management command to compare an estimated group map with the true one.

Usage:
    python manage.py eval out/X_est.map data/X.map
"""

from apps.bench.management.commands._base import GroupmapCommand, directory_argument
from apps.bench.models import LabelAlignment
from apps.bench.services import align_labels_hungarian, misclassification_rate
from apps.lattice.services import read_map


class Command(GroupmapCommand):
    help = "Print the misclassification rate of an estimated map against a true map"

    def add_arguments(self, parser):
        parser.add_argument("estimate", type=directory_argument)
        parser.add_argument("truth", type=directory_argument)
        parser.add_argument("--align-labels", choices=LabelAlignment.values, default=LabelAlignment.NONE)

    def run(self, **options):
        X_est = read_map(options["estimate"])
        X_true = read_map(options["truth"])
        if options["align_labels"] == LabelAlignment.HUNGARIAN:
            X_est = align_labels_hungarian(X_est, X_true)
        self.stdout.write(f"{misclassification_rate(X_est, X_true):.6f}")
