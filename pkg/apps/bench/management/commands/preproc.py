"""
Management command to turn a set of ICA components into subject label maps.

Usage:
    python manage.py preproc --components comps/ --num-clusters 8 --K 5 --output data/subjects
"""

from apps.bench.management.commands._base import GroupmapCommand, directory_argument
from apps.preproc.services import read_components, run_pipeline, save_subject_maps


class Command(GroupmapCommand):
    help = "Cluster comp_<subject>_<index> components and write thresholded subject maps Y_<i>.map"

    def add_arguments(self, parser):
        parser.add_argument("--components", type=directory_argument, required=True)
        parser.add_argument("--num-clusters", type=int, required=True)
        parser.add_argument("--K", type=int, required=True, help="Labels in the output maps, 0 included")
        parser.add_argument("--q", type=float, default=None, help="FDR level")
        parser.add_argument("--sigma", type=float, default=None, help="IMED Gaussian width in pixels")
        parser.add_argument("--min-subjects", type=int, default=None, help="Consistency threshold per cluster")
        parser.add_argument("--output", type=directory_argument, required=True)

    def run(self, **options):
        components, dims = read_components(options["components"])
        result = run_pipeline(
            components,
            dims,
            options["num_clusters"],
            options["K"],
            q=options["q"],
            sigma=options["sigma"],
            min_subjects=options["min_subjects"],
        )
        paths = save_subject_maps(result, options["output"])
        self.success(
            f"Kept {len(result.retained_clusters)} of {options['num_clusters']} clusters; "
            f"wrote {len(paths)} subject maps to {options['output']}"
        )
