"""Pipeline configuration: adverb/antonym pairs and run settings."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .buckets import BucketScheme, DEFAULT_SCHEME
from .errors import DataError

# The eleven adverb/antonym categories; the audio-only loudly/quietly
# category is not part of the task.
DEFAULT_PAIRS: tuple[tuple[str, str], ...] = (
    ("upwards", "downwards"),
    ("forwards", "backwards"),
    ("outdoor", "indoor"),
    ("slowly", "quickly"),
    ("gently", "firmly"),
    ("out", "in"),
    ("partially", "completely"),
    ("properly", "improperly"),
    ("periodically", "continuously"),
    ("instantly", "gradually"),
    ("off", "on"),
)

TRAIN_FRACTION = 0.7


def parse_pairs(text: str) -> list[tuple[str, str]]:
    """One adverb/antonym pair per line."""
    pairs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "/" not in line:
            raise DataError(f"pairs line {line_no}: expected adverb/antonym")
        adverb, antonym = (part.strip() for part in line.split("/", 1))
        if not adverb or not antonym:
            raise DataError(f"pairs line {line_no}: empty class token")
        pairs.append((adverb, antonym))
    if not pairs:
        raise DataError("pairs file defines no pairs")
    return pairs


def load_pairs(path) -> list[tuple[str, str]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pairs(fh.read())


def antonym_of(label: str, pairs: list[tuple[str, str]]) -> str:
    for adverb, antonym in pairs:
        if label == adverb:
            return antonym
        if label == antonym:
            return adverb
    raise DataError(f"label {label!r} not in any configured pair")


def pair_slug(pair: tuple[str, str]) -> str:
    return f"{pair[0]}__{pair[1]}"


@dataclass
class PipelineConfig:
    """Settings shared across pipeline stages."""

    obs_dir: Path
    clips_file: Path
    work_dir: Path
    seed: int
    window: int = 5
    scheme: BucketScheme = field(default_factory=lambda: DEFAULT_SCHEME)
    pairs: list[tuple[str, str]] = field(
        default_factory=lambda: list(DEFAULT_PAIRS))
    svm_c: float = 1.0
    svm_gamma: float | None = None  # None = scale heuristic
    train_fraction: float = TRAIN_FRACTION


PIPELINE_CONFIG_KEYS = ("obs", "clips", "embeddings", "work", "seed",
                        "window", "C", "gamma", "train_fraction", "scheme",
                        "pairs")


def parse_config_file(text: str) -> dict[str, str]:
    """Key/value pipeline config text; command-line flags override it."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"config line {line_no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in PIPELINE_CONFIG_KEYS:
            raise DataError(f"config line {line_no}: unknown key {key!r} "
                            f"(known: {', '.join(PIPELINE_CONFIG_KEYS)})")
        values[key] = value
    return values


def load_config_file(path) -> dict[str, str]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_file(fh.read())


@dataclass(frozen=True)
class ClipMeta:
    clip_id: str
    action: str
    labels: tuple[str, ...]


def parse_clips(text: str) -> list[ClipMeta]:
    """clips.tsv rows: clip_id <TAB> action <TAB> comma-separated labels."""
    out = []
    seen: set[str] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise DataError(f"clips line {line_no}: expected 3 tab-separated "
                            "fields (clip_id, action, labels)")
        clip_id, action, labels_text = parts
        if clip_id in seen:
            raise DataError(f"clips line {line_no}: duplicate clip {clip_id!r}")
        seen.add(clip_id)
        labels = tuple(l.strip() for l in labels_text.split(",") if l.strip())
        if not labels:
            raise DataError(f"clips line {line_no}: clip {clip_id!r} has no labels")
        out.append(ClipMeta(clip_id=clip_id, action=action, labels=labels))
    return out


def load_clips(path) -> list[ClipMeta]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_clips(fh.read())
