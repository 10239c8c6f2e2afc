"""
Management command to run a benchmark experiment from a JSON config.

Usage:
    python manage.py grid --config sample_data/comparison_model1.json --dims 32x32 --repeats 10 --output results/
"""

import dataclasses

from apps.bench.management.commands._base import GroupmapCommand, dims_argument, directory_argument
from apps.bench.models import LabelAlignment, RowStatus
from apps.bench.services import load_experiment_config, run_grid, summarize, write_boxplots, write_results, write_summary
from apps.bench.services.grid import EXECUTORS


class Command(GroupmapCommand):
    help = "Generate every grid dataset, fit every method from every init, and write results tables"

    def add_arguments(self, parser):
        parser.add_argument("--config", type=directory_argument, required=True, help="Experiment JSON file")
        parser.add_argument("--seed", type=int, default=None, help="Override the config's root_seed")
        parser.add_argument("--dims", type=dims_argument, default=None, help="Override the lattice size")
        parser.add_argument("--repeats", type=int, default=None, help="Override the number of repeats")
        parser.add_argument("--sweeps", type=int, default=None, help="Override the Gibbs sweeps per field")
        parser.add_argument("--max-iter", type=int, default=None, help="Iteration cap for every method")
        parser.add_argument("--output", type=directory_argument, default=None, help="Override output_dir")
        parser.add_argument("--executor", choices=EXECUTORS, default=None)
        parser.add_argument("--align-labels", choices=LabelAlignment.values, default=None)
        parser.add_argument("--timing", action="store_true", help="Record wall-clock time per run")

    def run(self, **options):
        config = load_experiment_config(options["config"])
        overrides = {
            "root_seed": options["seed"],
            "dims": options["dims"],
            "repeats": options["repeats"],
            "sweeps": options["sweeps"],
            "max_iterations": options["max_iter"],
            "output_dir": options["output"],
            "align_labels": options["align_labels"],
            "record_timing": options["timing"] or None,
        }
        config = dataclasses.replace(config, **{k: v for k, v in overrides.items() if v is not None})

        rows = run_grid(config, options["executor"])
        summaries = summarize(rows)
        out = config.output_dir
        write_results(rows, out / "results.csv")
        write_summary(summaries, out / "summary.csv")
        write_boxplots(summaries, out)

        failed = sum(row.status == RowStatus.ERROR for row in rows)
        self.success(f"Wrote {len(rows)} rows ({failed} failed) and {len(summaries)} summaries to {out}")
        for s in summaries:
            self.stdout.write(f"  M={s.M:<3} K={s.K:<3} {s.method.value:<4} {s.init.value}  mean={s.mean:.4f}")
