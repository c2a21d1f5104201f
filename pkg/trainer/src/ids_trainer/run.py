"""Experiment runner: per-seed training with a stratified validation holdout,
final evaluation on the untouched test split, mean +/- std reporting.
"""

from __future__ import annotations

import copy
import csv
import sys
from pathlib import Path

import click
import numpy as np
import torch
from torch import nn

from ids_trainer import data as data_mod
from ids_trainer.config import (
    DESK_SEEDS,
    DESK_SUBSAMPLE,
    ExperimentConfig,
    Modality,
    PAPER_EPOCHS,
    PAPER_SEEDS,
)
from ids_trainer.data import ModalityData, stratified_val_split, subsample_per_class
from ids_trainer.errors import ConfigError, IoError, TrainerError
from ids_trainer.metrics import MetricsReport, SeedMetrics, confusion_matrix, evaluate_confusion
from ids_trainer.model import build_cnn


def _seed_everything(seed: int) -> None:
    np.random.seed(seed)
    torch.manual_seed(seed)
    torch.use_deterministic_algorithms(True)


def _batches(x, y, batch_size, generator=None):
    n = len(y)
    order = torch.randperm(n, generator=generator) if generator is not None else torch.arange(n)
    for start in range(0, n, batch_size):
        idx = order[start : start + batch_size]
        yield x[idx], y[idx]


@torch.no_grad()
def _predict(model, x, batch_size=512):
    model.eval()
    preds = []
    for start in range(0, len(x), batch_size):
        preds.append(model(x[start : start + batch_size]).argmax(dim=1))
    return torch.cat(preds)


def _train_one_seed(config: ExperimentConfig, train_full: ModalityData, seed: int):
    _seed_everything(seed)
    subsampled = subsample_per_class(train_full, config.subsample_per_class, seed)
    train, val = stratified_val_split(subsampled, config.val_fraction, seed)

    n_classes = len(train_full.class_names)
    input_shape = tuple(train.x.shape[1:])
    model = build_cnn(config.modality, input_shape, n_classes)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()

    x_train = torch.from_numpy(train.x)
    y_train = torch.from_numpy(train.y)
    x_val = torch.from_numpy(val.x)
    y_val = torch.from_numpy(val.y)
    shuffler = torch.Generator().manual_seed(seed)

    best_state = copy.deepcopy(model.state_dict())
    best_val = -1.0
    for _ in range(config.epochs):
        model.train()
        for xb, yb in _batches(x_train, y_train, config.batch_size, shuffler):
            optimizer.zero_grad()
            loss_fn(model(xb), yb).backward()
            optimizer.step()
        val_acc = float((_predict(model, x_val) == y_val).float().mean())
        if val_acc > best_val:
            best_val = val_acc
            best_state = copy.deepcopy(model.state_dict())

    model.load_state_dict(best_state)
    return model


def run_experiment(config: ExperimentConfig, data_paths: dict) -> MetricsReport:
    """Trains one model per seed and evaluates each on the test split.

    ``data_paths``: flow modality needs {"train_flow", "test_flow"}; image
    modality needs {"train_images", "train_labels", "test_images",
    "test_labels"}. All artifacts come from the codec CLI.
    """
    if config.modality is Modality.FLOW_1D:
        for key in ("train_flow", "test_flow"):
            if key not in data_paths or not Path(data_paths[key]).exists():
                raise IoError(f"missing flow export {key!r}")
        train_full = data_mod.load_flow_csv(data_paths["train_flow"])
    else:
        for key in ("train_images", "train_labels", "test_images", "test_labels"):
            if key not in data_paths or not Path(data_paths[key]).exists():
                raise IoError(f"missing image artifact {key!r}")
        train_full = data_mod.load_image_dir(
            data_paths["train_images"], data_paths["train_labels"]
        )

    data_mod.log_event("fit:start")
    models = [_train_one_seed(config, train_full, seed) for seed in config.seeds]
    data_mod.log_event("fit:end")

    # the test split is loaded only after every seed has finished training
    if config.modality is Modality.FLOW_1D:
        test = data_mod.load_flow_csv(data_paths["test_flow"])
    else:
        test = data_mod.load_image_dir(data_paths["test_images"], data_paths["test_labels"])
    if test.x.shape[1:] != train_full.x.shape[1:]:
        raise ConfigError(
            f"test shape {test.x.shape[1:]} differs from train {train_full.x.shape[1:]}"
        )

    x_test = torch.from_numpy(test.x)
    n_classes = len(train_full.class_names)
    per_seed = []
    for seed, model in zip(config.seeds, models):
        pred = _predict(model, x_test).numpy()
        cm = confusion_matrix(test.y, pred, n_classes)
        metrics = evaluate_confusion(cm, seed=seed)
        per_seed.append(metrics)
    return MetricsReport(class_names=train_full.class_names, per_seed=tuple(per_seed))


def write_report_csv(report: MetricsReport, path: str | Path) -> None:
    rows = report.summary_rows()
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def print_report(report: MetricsReport, title: str) -> None:
    click.echo(f"\n{title}")
    click.echo(f"{'seed':>10} {'accuracy':>18} {'macro F1':>18}")
    for row in report.summary_rows():
        acc, f1 = row["accuracy"], row["macro_f1"]
        acc = f"{acc:.4f}" if isinstance(acc, float) else acc
        f1 = f"{f1:.4f}" if isinstance(f1, float) else f1
        click.echo(f"{row['seed']:>10} {acc:>18} {f1:>18}")


@click.command()
@click.option("--modality", type=click.Choice(["flow", "image"]), required=True)
@click.option("--label-mode", type=click.Choice(["binary", "multi"]), default="binary")
@click.option("--train-flow", type=click.Path(), default=None)
@click.option("--test-flow", type=click.Path(), default=None)
@click.option("--train-images", type=click.Path(), default=None)
@click.option("--train-labels", type=click.Path(), default=None)
@click.option("--test-images", type=click.Path(), default=None)
@click.option("--test-labels", type=click.Path(), default=None)
@click.option("--epochs", default=None, type=int, help="default 10, paper scale 100")
@click.option("--batch-size", default=64, show_default=True)
@click.option("--learning-rate", default=1e-4, show_default=True)
@click.option("--seeds", default=None, help="comma-separated, default 42,43,44")
@click.option("--val-fraction", default=0.1, show_default=True)
@click.option("--subsample-per-class", default=DESK_SUBSAMPLE, show_default=True, type=int)
@click.option("--paper-scale", is_flag=True, help="100 epochs, seeds 42..51, no subsample cap")
@click.option("--report-csv", "report_path", type=click.Path(), default=None)
def main(modality, label_mode, train_flow, test_flow, train_images, train_labels,
         test_images, test_labels, epochs, batch_size, learning_rate, seeds,
         val_fraction, subsample_per_class, paper_scale, report_path):
    """Train the small CNN on one modality and report test metrics."""
    try:
        if paper_scale:
            epochs = epochs or PAPER_EPOCHS
            seed_tuple = PAPER_SEEDS
            subsample_per_class = None
        else:
            epochs = epochs or 10
            seed_tuple = DESK_SEEDS
        if seeds:
            seed_tuple = tuple(int(s) for s in seeds.split(","))
        config = ExperimentConfig(
            modality=Modality.FLOW_1D if modality == "flow" else Modality.IMAGE_2D,
            label_mode=label_mode,
            epochs=epochs,
            batch_size=batch_size,
            learning_rate=learning_rate,
            seeds=seed_tuple,
            val_fraction=val_fraction,
            subsample_per_class=subsample_per_class,
        )
        paths = {
            "train_flow": train_flow, "test_flow": test_flow,
            "train_images": train_images, "train_labels": train_labels,
            "test_images": test_images, "test_labels": test_labels,
        }
        report = run_experiment(config, {k: v for k, v in paths.items() if v})
    except TrainerError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    print_report(report, f"{modality} modality, {label_mode} labels, {epochs} epochs")
    if report_path:
        write_report_csv(report, report_path)
        click.echo(f"report written to {report_path}")


if __name__ == "__main__":
    main()
