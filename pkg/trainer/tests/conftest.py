import numpy as np
import pytest
from click.testing import CliRunner


def build_artifacts(root, scale):
    """Produces codec-CLI artifacts (manifest, PNGs, labels, flow exports)
    for a synthetic UNSW-NB15 corpus at the given scale. The trainer only
    ever sees these CLI outputs."""
    from flow2img.cli import main as codec_cli
    from flow2img.synth import make_unsw

    paths = make_unsw(root / "raw", scale=scale)
    runner = CliRunner()

    def run(*args):
        result = runner.invoke(codec_cli, [str(a) for a in args])
        assert result.exit_code == 0, result.output

    manifest = root / "manifest.json"
    run("fit", "--input", paths["train"], "--schema", "unswnb15",
        "--manifest", manifest)
    artifacts = {"manifest": manifest}
    for split in ("train", "test"):
        img_dir = root / f"images_{split}"
        labels = root / f"labels_{split}.csv"
        flow = root / f"flow_{split}.csv"
        run("encode", "--manifest", manifest, "--input", paths[split],
            "--out-dir", img_dir, "--labels", labels)
        run("export-flow", "--train", paths["train"], "--input", paths[split],
            "--schema", "unswnb15", "--out", flow)
        artifacts[f"{split}_images"] = img_dir
        artifacts[f"{split}_labels"] = labels
        artifacts[f"{split}_flow"] = flow
    return artifacts


@pytest.fixture(scope="session")
def tiny_artifacts(tmp_path_factory):
    """Sub-1% corpus for fast unit tests."""
    return build_artifacts(tmp_path_factory.mktemp("tiny"), scale=0.005)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
