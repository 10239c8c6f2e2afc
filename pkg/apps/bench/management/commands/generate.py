"""
Management command to generate a synthetic multi-subject dataset.

Usage:
    python manage.py generate --M 20 --K 10 --dims 64x64 --model I --seed 3 --output data/M20_K10
"""

from apps.bench.management.commands._base import GroupmapCommand, dims_argument, directory_argument
from apps.forward.models import GenerativeModel, MaskConvention
from apps.forward.services import generate_dataset, save_dataset


class Command(GroupmapCommand):
    help = "Generate a group map, subject masks and subject maps, and write them to a dataset directory"

    def add_arguments(self, parser):
        parser.add_argument("--M", type=int, required=True, help="Number of subjects")
        parser.add_argument("--K", type=int, required=True, help="Number of labels, 0 included")
        parser.add_argument("--dims", type=dims_argument, default="64x64", help="Lattice size, e.g. 64x64")
        parser.add_argument("--model", type=GenerativeModel.parse, default="I", help="Generative model: 1/I or 2/II")
        parser.add_argument("--sweeps", type=int, default=None, help="Gibbs sweeps per field")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--epsilon", type=float, default=None, help="Label noise for Model II")
        parser.add_argument(
            "--mask-convention",
            choices=MaskConvention.values,
            default=MaskConvention.MAIN_TEXT,
            help="Which mask state propagates the group label",
        )
        parser.add_argument("--output", type=directory_argument, required=True, help="Dataset directory")

    def run(self, **options):
        dataset = generate_dataset(
            options["M"],
            options["K"],
            options["dims"],
            options["model"],
            sweeps=options["sweeps"],
            seed=options["seed"],
            epsilon=options["epsilon"],
            convention=MaskConvention(options["mask_convention"]),
        )
        save_dataset(dataset, options["output"])
        self.success(
            f"Generated {dataset.M} subjects on {dataset.dims} (K={dataset.K}, Model {dataset.model.value}) "
            f"in {options['output']}"
        )
