import random

import pytest

SECTORS = ("n", "ne", "e", "se", "s", "sw", "w", "nw")
AREAS = ("very_small", "small", "medium", "large", "very_large")
MIPS = ("small", "medium", "large", "very_large")
VALUE_OFFSETS = {2, 4, 7, 11, 13, 14, 15, 16, 17, 18}


def step_words(rng, label):
    placement = []
    for _ in range(3):
        placement.append(rng.choice(("top", "bottom")))
        placement.append(rng.choice(("left", "right")))
    return [label,
            "magnitude", f"{rng.uniform(0, 40):.1f}",
            "angle", rng.choice(SECTORS),
            "operation", "area", rng.choice(AREAS),
            "movement", "in", "place", rng.choice(MIPS),
            "place", *placement]


def make_flat_lines(n_lines=64, n_steps=6, seed=0):
    rng = random.Random(seed)
    lines = []
    for i in range(n_lines):
        label = rng.choice(("person", "dog", "car"))
        words = []
        for _ in range(n_steps):
            words.extend(step_words(rng, label))
        lines.append((f"c{i:03d}#{label}", words))
    return lines


def write_flat_corpus(path, lines):
    with open(path, "w", encoding="utf-8") as fh:
        for key, words in lines:
            fh.write(f"{key}\t{' '.join(words)}\n")


def write_masked_corpus(path, lines, rate=0.2, seed=1):
    rng = random.Random(seed)
    with open(path, "w", encoding="utf-8") as fh:
        for key, words in lines:
            masked = list(words)
            targets = []
            for pos, word in enumerate(words):
                if pos % 19 in VALUE_OFFSETS and rng.random() < rate:
                    masked[pos] = "[MASK]"
                    targets.append(f"{pos}:{word}")
            fh.write(f"{key}\t{' '.join(masked)}\t{' '.join(targets)}\n")


@pytest.fixture(scope="session")
def flat_corpus(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "flat.txt"
    write_flat_corpus(path, make_flat_lines())
    return path


@pytest.fixture(scope="session")
def masked_corpus(tmp_path_factory, flat_corpus):
    path = flat_corpus.parent / "masked.txt"
    write_masked_corpus(path, make_flat_lines())
    return path


@pytest.fixture(scope="session")
def tiny_model(tmp_path_factory, flat_corpus):
    from neural_adapter.corpus import corpus_vocabulary, read_flat_corpus
    from neural_adapter.model import build_tiny_mlm
    out = tmp_path_factory.mktemp("model") / "tiny"
    words = corpus_vocabulary(read_flat_corpus(flat_corpus))
    build_tiny_mlm(words, out, hidden_size=32, num_layers=2, num_heads=2,
                   seed=0)
    return out
