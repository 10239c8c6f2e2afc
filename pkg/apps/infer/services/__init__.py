"""
Inference services: initialisation, variational Bayes and coordinate ascent.
"""

from .icm import icm_update_H, icm_update_X, joint_log_posterior, run_icm
from .initialization import init_greedy, init_random
from .likelihood import LikelihoodTable, log_lik_terms
from .storage import save_result
from .theta import icm_update_theta, vb_update_theta
from .vb import compute_elbo, run_vb, vb_update_q, vb_update_X

__all__ = [
    "LikelihoodTable",
    "compute_elbo",
    "icm_update_H",
    "icm_update_X",
    "icm_update_theta",
    "init_greedy",
    "init_random",
    "joint_log_posterior",
    "log_lik_terms",
    "run_icm",
    "run_vb",
    "save_result",
    "vb_update_X",
    "vb_update_q",
    "vb_update_theta",
]
