"""Secondary acceptance: fine-tune smoke plus the summary-vector round
trip into the classifier pipeline, consuming it purely through its CLI
and file formats."""

import random
import subprocess
import sys
import pytest

from neural_adapter.export import export_action_embeddings, export_summaries
from neural_adapter.finetune import FineTuneJob, finetune
from neural_adapter.model import build_tiny_mlm
from neural_adapter.corpus import corpus_vocabulary, read_flat_corpus

SECTORS = ("n", "ne", "e", "se", "s", "sw", "w", "nw")
AREAS = ("very_small", "small", "medium", "large", "very_large")
MIPS = ("small", "medium", "large", "very_large")


def classifier_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "adverbial.cli", *map(str, argv)],
        capture_output=True, text=True)


def write_program(path, clip_id, label, antonym, action, rng, n_steps=6):
    lines = [f"% clip: {clip_id}", f"% action: {action}",
             f"% labels: {label}/{antonym}", "% background", "% behaviours"]
    obj = rng.choice(("person", "dog", "car"))
    for t in range(1, n_steps + 1):
        mag = (rng.uniform(2, 8) if label in ("upwards",)
               else rng.uniform(20, 30))
        lines.append(f"detected({obj}, {t}).")
        lines.append(f"magnitude({obj}, {mag:.1f}, {t}).")
        lines.append(f"angle({obj}, {rng.choice(SECTORS)}, {t}).")
        lines.append(f"operation_area({obj}, {rng.choice(AREAS)}, {t}).")
        lines.append(f"movement_in_place({obj}, {rng.choice(MIPS)}, {t}).")
        for level in range(3):
            vert = rng.choice(("top", "bottom"))
            horiz = rng.choice(("left", "right"))
            lines.append(f"place({obj}, {level}, {vert}, {horiz}, {t}).")
    path.write_text("".join(line + "\n" for line in lines))


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("secondary_acceptance")
    asp_dir = root / "asp"
    asp_dir.mkdir()
    rng = random.Random(13)
    for i in range(48):
        label, antonym = (("upwards", "downwards") if i % 2 == 0
                          else ("downwards", "upwards"))
        write_program(asp_dir / f"n{i:03d}.lp", f"n{i:03d}", label, antonym,
                      rng.choice(("run", "cook")), rng)
    (root / "pairs.cfg").write_text("upwards/downwards\n")

    flat = root / "flat.txt"
    result = classifier_cli("flatten", "--asp", asp_dir, "--out", flat)
    assert result.returncode == 0, result.stderr
    masked = root / "masked.txt"
    result = classifier_cli("mask", "--corpus", flat, "--rate", "0.2",
                            "--seed", "7", "--out", masked)
    assert result.returncode == 0, result.stderr
    return root


def test_finetune_smoke_and_summary_round_trip(workspace):
    flat = workspace / "flat.txt"
    masked = workspace / "masked.txt"

    words = corpus_vocabulary(read_flat_corpus(flat))
    base = build_tiny_mlm(words, workspace / "base", hidden_size=32,
                          num_layers=2, num_heads=2, seed=0)
    result = finetune(FineTuneJob(
        corpus_path=masked, model_dir=str(base),
        output_dir=workspace / "tuned", epochs=1, learning_rate=5e-4,
        batch_size=8, holdout_fraction=0.2, seed=0))
    print(f"SECONDARY fine-tune-smoke: held-out loss "
          f"{result.holdout_losses[0]:.4f} -> {result.holdout_losses[1]:.4f}")
    assert result.holdout_losses[1] < result.holdout_losses[0]
    assert 0.15 <= result.mask_fraction <= 0.25

    summaries = workspace / "summaries.txt"
    entries = export_summaries(str(workspace / "tuned"), flat, summaries)
    assert len(entries) == 48

    actions_vocab = workspace / "actions.txt"
    actions_vocab.write_text("run\ncook\n")
    embeddings = workspace / "action_embeddings.txt"
    export_action_embeddings(str(workspace / "tuned"), actions_vocab,
                             embeddings)

    features = workspace / "features"
    result = classifier_cli(
        "featurize", "--asp", workspace / "asp",
        "--summary-vectors", summaries, "--embeddings", embeddings,
        "--out", features, "--pairs", workspace / "pairs.cfg")
    assert result.returncode == 0, result.stderr

    models = workspace / "models"
    result = classifier_cli(
        "train", "--features", features, "--out", models, "--seed", "1",
        "--pairs", workspace / "pairs.cfg")
    assert result.returncode == 0, result.stderr

    report = workspace / "report.txt"
    result = classifier_cli(
        "evaluate", "--models", models, "--asp", workspace / "asp",
        "--summary-vectors", summaries, "--embeddings", embeddings,
        "--report", report, "--pairs", workspace / "pairs.cfg")
    assert result.returncode == 0, result.stderr
    assert "upwards/downwards" in report.read_text()
    print("SECONDARY summary-evaluation: PASS "
          f"({report.read_text().splitlines()[2].strip()})")


def test_exported_vectors_satisfy_the_classifier_loader(workspace):
    # dimension consistency and key uniqueness, checked by the consumer
    result = subprocess.run(
        [sys.executable, "-c",
         "import sys; from adverbial.flatten import import_summary_vectors; "
         "t = import_summary_vectors(sys.argv[1]); print(t.dim, len(t.entries))",
         str(workspace / "summaries.txt")],
        capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    assert result.stdout.split() == ["32", "48"]
