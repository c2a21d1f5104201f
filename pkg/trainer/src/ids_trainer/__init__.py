"""Desk-scale CNN harness comparing flow-vector and image modalities."""

from ids_trainer.config import ExperimentConfig, Modality
from ids_trainer.errors import ConfigError, IoError, TrainerError
from ids_trainer.metrics import MetricsReport, SeedMetrics, evaluate_confusion
from ids_trainer.model import build_cnn
from ids_trainer.run import run_experiment

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "IoError",
    "MetricsReport",
    "Modality",
    "SeedMetrics",
    "TrainerError",
    "build_cnn",
    "evaluate_confusion",
    "run_experiment",
]

__version__ = "0.1.0"
