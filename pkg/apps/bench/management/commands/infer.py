"""
Management command to estimate the group map from a directory of subject maps.

Usage:
    python manage.py infer --data data/M20_K10 --algo vb --model 2 --init random --seed 7 --output out/
"""

from apps.bench.management.commands._base import GroupmapCommand, directory_argument
from apps.bench.services import misclassification_rate
from apps.core.exceptions import MapFormatError
from apps.forward.models import GenerativeModel, ModelParams
from apps.forward.services import load_manifest, load_subjects
from apps.infer.models import Algorithm, InferenceOptions, XUpdate
from apps.infer.services import init_greedy, init_random, run_icm, run_vb, save_result
from apps.lattice.services import read_map


class Command(GroupmapCommand):
    help = "Run coordinate ascent or variational Bayes on subject maps Y_<i>.map and save the estimate"

    def add_arguments(self, parser):
        parser.add_argument("--data", type=directory_argument, required=True, help="Directory holding Y_<i>.map")
        parser.add_argument("--model", type=GenerativeModel.parse, default="II", help="Model for inference: 1 or 2")
        parser.add_argument("--algo", choices=Algorithm.values, default=Algorithm.VB)
        parser.add_argument("--init", choices=["random", "greedy", "file"], default="random")
        parser.add_argument("--init-file", type=directory_argument, help="Initial group map for --init file")
        parser.add_argument("--seed", type=int, default=0, help="Seed of the random initialisation")
        parser.add_argument("--max-iter", type=int, default=None)
        parser.add_argument("--tol", type=float, default=None, help="Relative F change (vb) or label changes (icm)")
        parser.add_argument("--snapshot-every", type=int, default=None, help="Save X every k iterations")
        parser.add_argument("--x-update", choices=XUpdate.values, default=XUpdate.SEQUENTIAL)
        parser.add_argument(
            "--q-prior-coupling",
            "--q-coupling",
            dest="q_prior_coupling",
            action="store_true",
            help="Mean-field mask coupling in the q update",
        )
        parser.add_argument(
            "--fixed-theta",
            action="store_true",
            help="Hold theta at the generating parameters from the dataset manifest",
        )
        parser.add_argument("--output", type=directory_argument, required=True, help="Results directory")

    def initial_map(self, subjects, options):
        if options["init"] == "file":
            if options["init_file"] is None:
                raise ValueError("--init file needs --init-file")
            return read_map(options["init_file"])
        if options["init"] == "greedy":
            return init_greedy(subjects)
        return init_random(subjects[0].dims, subjects[0].K, options["seed"])

    def inference_options(self, options) -> InferenceOptions:
        overrides = {
            "model": options["model"],
            "seed": options["seed"],
            "x_update": options["x_update"],
            "q_prior_coupling": options["q_prior_coupling"],
            "snapshot_every": options["snapshot_every"],
        }
        if options["max_iter"] is not None:
            overrides["max_iterations"] = options["max_iter"]
        if options["tol"] is not None:
            overrides["convergence_tol"] = options["tol"]
        if options["fixed_theta"]:
            overrides["estimate_theta"] = False
            manifest = load_manifest(options["data"])
            try:
                overrides["initial_params"] = ModelParams.from_dict(manifest)
            except KeyError as exc:
                raise MapFormatError(f"Manifest in {options['data']} has no parameter {exc}") from exc
        if options["algo"] == Algorithm.VB:
            return InferenceOptions.for_vb(**overrides)
        return InferenceOptions.for_icm(**overrides)

    def run(self, **options):
        subjects = load_subjects(options["data"])
        X0 = self.initial_map(subjects, options)
        inference = self.inference_options(options)
        if options["algo"] == Algorithm.VB:
            state = run_vb(subjects, X0, inference)
        else:
            state = run_icm(subjects, X0, inference)
        save_result(state, options["output"])

        self.success(
            f"{state.algorithm.label}: {'converged' if state.converged else 'stopped'} after "
            f"{state.iteration} iterations; results in {options['output']}"
        )
        truth = options["data"] / "X.map"
        if truth.exists():
            try:
                rate = misclassification_rate(state.X, read_map(truth))
            except (MapFormatError, ValueError):
                return
            self.stdout.write(f"misclassification vs X.map: {rate:.6f}")
