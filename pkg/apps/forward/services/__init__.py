"""
Forward-model services: hyperprior draws, subject generation and dataset storage.
"""

from .generation import (
    generate_dataset,
    generate_subject_model1,
    generate_subject_model2,
    sample_params,
)
from .storage import load_dataset, load_manifest, load_subjects, save_dataset

__all__ = [
    "generate_dataset",
    "generate_subject_model1",
    "generate_subject_model2",
    "load_dataset",
    "load_manifest",
    "load_subjects",
    "sample_params",
    "save_dataset",
]
