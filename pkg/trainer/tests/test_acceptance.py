"""Directional flow-vs-image comparison at desk scale.

Runs both modalities on identical subsamples and seeds of a 10%-scale
synthetic UNSW-NB15 corpus and checks that (a) both beat the majority-class
baseline and (b) the image modality does at least as well as the flow
modality on mean accuracy.
"""

import numpy as np
import pytest

from conftest import build_artifacts
from ids_trainer.config import ExperimentConfig, Modality
from ids_trainer.data import load_flow_csv
from ids_trainer.run import run_experiment

pytestmark = pytest.mark.acceptance


@pytest.fixture(scope="module")
def desk_artifacts(tmp_path_factory):
    return build_artifacts(tmp_path_factory.mktemp("desk"), scale=0.1)


def test_acceptance_image_vs_flow(desk_artifacts):
    common = dict(
        label_mode="binary",
        epochs=10,
        seeds=(42, 43, 44),
        subsample_per_class=2000,
    )
    flow_report = run_experiment(
        ExperimentConfig(modality=Modality.FLOW_1D, **common),
        {"train_flow": desk_artifacts["train_flow"],
         "test_flow": desk_artifacts["test_flow"]},
    )
    image_report = run_experiment(
        ExperimentConfig(modality=Modality.IMAGE_2D, **common),
        {"train_images": desk_artifacts["train_images"],
         "train_labels": desk_artifacts["train_labels"],
         "test_images": desk_artifacts["test_images"],
         "test_labels": desk_artifacts["test_labels"]},
    )

    test = load_flow_csv(desk_artifacts["test_flow"])
    majority = float(np.bincount(test.y).max() / len(test.y))

    flow_acc = flow_report.mean_accuracy
    image_acc = image_report.mean_accuracy
    ok = flow_acc > majority and image_acc > majority and image_acc >= flow_acc
    print(
        f"[{'PASS' if ok else 'FAIL'}] image {image_acc:.4f}±"
        f"{image_report.std_accuracy:.4f} >= flow {flow_acc:.4f}±"
        f"{flow_report.std_accuracy:.4f}, both above majority baseline "
        f"{majority:.4f} (3 seeds, 10 epochs, <=2000 records per class)"
    )
    assert flow_acc > majority, f"flow {flow_acc:.4f} <= baseline {majority:.4f}"
    assert image_acc > majority, f"image {image_acc:.4f} <= baseline {majority:.4f}"
    assert image_acc >= flow_acc, f"image {image_acc:.4f} < flow {flow_acc:.4f}"
