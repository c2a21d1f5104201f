import pytest

from ids_trainer import data as data_mod
from ids_trainer.config import ExperimentConfig, Modality
from ids_trainer.errors import ConfigError, IoError
from ids_trainer.run import run_experiment


def tiny_config(modality, **overrides):
    defaults = dict(
        modality=modality,
        epochs=2,
        seeds=(42,),
        subsample_per_class=100,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def flow_paths(a):
    return {"train_flow": a["train_flow"], "test_flow": a["test_flow"]}


def image_paths(a):
    return {
        "train_images": a["train_images"], "train_labels": a["train_labels"],
        "test_images": a["test_images"], "test_labels": a["test_labels"],
    }


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(modality=Modality.FLOW_1D, epochs=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(modality=Modality.FLOW_1D, label_mode="ternary")
    with pytest.raises(ConfigError):
        ExperimentConfig(modality=Modality.FLOW_1D, seeds=())
    with pytest.raises(ConfigError):
        ExperimentConfig(modality=Modality.FLOW_1D, val_fraction=0.0)
    cfg = ExperimentConfig(modality=Modality.IMAGE_2D)
    assert cfg.batch_size == 64 and cfg.learning_rate == 1e-4


def test_missing_inputs_raise(tiny_artifacts):
    with pytest.raises(IoError):
        run_experiment(tiny_config(Modality.FLOW_1D), {"train_flow": tiny_artifacts["train_flow"]})
    with pytest.raises(IoError):
        run_experiment(
            tiny_config(Modality.IMAGE_2D),
            {**image_paths(tiny_artifacts), "test_labels": "/nonexistent.csv"},
        )


def test_flow_run_reproducible(tiny_artifacts):
    cfg = tiny_config(Modality.FLOW_1D)
    r1 = run_experiment(cfg, flow_paths(tiny_artifacts))
    r2 = run_experiment(cfg, flow_paths(tiny_artifacts))
    assert r1.per_seed == r2.per_seed  # identical metrics, same seed + config
    assert 0.0 <= r1.mean_accuracy <= 1.0
    assert len(r1.per_seed) == 1
    r3 = run_experiment(tiny_config(Modality.FLOW_1D, seeds=(43,)), flow_paths(tiny_artifacts))
    assert r3.per_seed[0].seed == 43


def test_image_run_reproducible(tiny_artifacts):
    cfg = tiny_config(Modality.IMAGE_2D)
    r1 = run_experiment(cfg, image_paths(tiny_artifacts))
    r2 = run_experiment(cfg, image_paths(tiny_artifacts))
    assert r1.per_seed == r2.per_seed
    assert r1.class_names == ("Normal", "Attack")


def test_test_split_read_only_after_training(tiny_artifacts):
    """Split hygiene: every read of a test artifact must come after training
    has finished, as witnessed by the chronological access log."""
    data_mod.access_log.clear()
    run_experiment(tiny_config(Modality.IMAGE_2D), image_paths(tiny_artifacts))
    log = list(data_mod.access_log)
    fit_end = log.index("fit:end")
    test_reads = [
        i for i, e in enumerate(log)
        if e.startswith("read:") and "test" in e.rsplit("/", 1)[-1]
    ]
    assert test_reads, "test split was never read"
    assert all(i > fit_end for i in test_reads)
    # and the training artifacts were read before training started
    train_reads = [
        i for i, e in enumerate(log)
        if e.startswith("read:") and "train" in e.rsplit("/", 1)[-1]
    ]
    assert all(i < log.index("fit:start") for i in train_reads)


def test_report_csv_and_cli(tiny_artifacts, tmp_path):
    from click.testing import CliRunner

    from ids_trainer.run import main

    out = tmp_path / "report.csv"
    result = CliRunner().invoke(main, [
        "--modality", "flow",
        "--train-flow", str(tiny_artifacts["train_flow"]),
        "--test-flow", str(tiny_artifacts["test_flow"]),
        "--epochs", "1", "--seeds", "42", "--subsample-per-class", "50",
        "--report-csv", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert "mean±std" in result.output
    import pandas as pd

    df = pd.read_csv(out)
    assert list(df.columns[:3]) == ["seed", "accuracy", "macro_f1"]
    assert len(df) == 2  # one seed + the aggregate row


def test_cli_reports_missing_input(tmp_path):
    from click.testing import CliRunner

    from ids_trainer.run import main

    result = CliRunner().invoke(main, [
        "--modality", "flow", "--train-flow", str(tmp_path / "nope.csv"),
        "--test-flow", str(tmp_path / "nope2.csv"),
    ])
    assert result.exit_code == 1
    assert "error:" in result.output
