"""Feature vectors for the pair classifiers.

A behaviour's features are the concatenation of a behaviour summary and
the clip's action-type embedding. The summary is either the indicator
bit vector (one bit per induced rule, duplicates occupying their own
positions) or an imported transformer summary vector. Class balancing
repeats the smaller class cyclically.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, TypeVar

import numpy as np

from .behaviour import ObjectBehaviour
from .buckets import BucketScheme
from .errors import DataError, EmbeddingError, InsufficientDataError
from .induction import InducedRuleSet
from .rules import rule_fires

log = logging.getLogger(__name__)

T = TypeVar("T")


class FeatureSource(Enum):
    INDICATOR = "indicator"
    SUMMARY = "summary"


@dataclass
class EmbeddingTable:
    """Token -> vector table in the textual word-vector format."""

    dim: int
    entries: dict[str, np.ndarray]
    misses: dict[str, int] = field(default_factory=dict)

    def lookup(self, token: str) -> np.ndarray:
        """Vector for a token; absent tokens resolve to zeros with a
        counted warning."""
        vec = self.entries.get(token)
        if vec is None:
            if token not in self.misses:
                log.warning("no embedding for token %r; using zero vector", token)
            self.misses[token] = self.misses.get(token, 0) + 1
            return np.zeros(self.dim)
        return vec

    @property
    def miss_count(self) -> int:
        return sum(self.misses.values())


def parse_embeddings(text: str, what: str = "embedding file") -> EmbeddingTable:
    lines = [l for l in text.splitlines()]
    if not lines or not lines[0].strip():
        raise EmbeddingError(f"{what}: missing 'count dim' header")
    header = lines[0].split()
    if len(header) != 2:
        raise EmbeddingError(f"{what}: header must be 'count dim'")
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError:
        raise EmbeddingError(f"{what}: non-integer header {lines[0]!r}")
    entries: dict[str, np.ndarray] = {}
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        token = parts[0]
        if len(parts) - 1 != dim:
            raise EmbeddingError(
                f"{what} line {line_no}: expected {dim} values for "
                f"{token!r}, got {len(parts) - 1}")
        if token in entries:
            raise EmbeddingError(f"{what} line {line_no}: duplicate token {token!r}")
        try:
            entries[token] = np.array([float(v) for v in parts[1:]])
        except ValueError:
            raise EmbeddingError(f"{what} line {line_no}: non-numeric value")
    if len(entries) != count:
        raise EmbeddingError(
            f"{what}: header declares {count} entries, found {len(entries)}")
    return EmbeddingTable(dim=dim, entries=entries)


def load_embeddings(path) -> EmbeddingTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_embeddings(fh.read(), what=str(path))


def format_embeddings(entries: dict[str, Sequence[float]], dim: int) -> str:
    lines = [f"{len(entries)} {dim}"]
    for token, vec in entries.items():
        if len(vec) != dim:
            raise EmbeddingError(f"vector for {token!r} has length "
                                 f"{len(vec)}, expected {dim}")
        lines.append(token + " " + " ".join(f"{float(v):.6g}" for v in vec))
    return "".join(line + "\n" for line in lines)


def indicator_vector(b: ObjectBehaviour, ruleset: InducedRuleSet,
                     scheme: BucketScheme) -> np.ndarray:
    """Firing bits, one per rule in multiset order."""
    return np.array([1.0 if rule_fires(r, b, scheme) else 0.0
                     for r in ruleset.rules])


def balance_by_repetition(a: list[T], b: list[T]) -> tuple[list[T], list[T]]:
    """Repeat the smaller class cyclically until the counts match."""
    if not a or not b:
        raise InsufficientDataError("cannot balance an empty class")
    target = max(len(a), len(b))

    def pad(xs: list[T]) -> list[T]:
        return [xs[i % len(xs)] for i in range(target)]

    return pad(a), pad(b)


@dataclass(frozen=True)
class FeatureVector:
    clip_id: str
    object_label: str
    label: str
    values: np.ndarray
    source: FeatureSource
    pair: tuple[str, str]


def build_feature(b: ObjectBehaviour, label: str, pair: tuple[str, str],
                  action: str | None, embeddings: EmbeddingTable,
                  scheme: BucketScheme,
                  ruleset: InducedRuleSet | None = None,
                  summaries: EmbeddingTable | None = None) -> FeatureVector:
    """Concatenate [indicator-or-summary | action-embedding]."""
    if (ruleset is None) == (summaries is None):
        raise DataError("exactly one of ruleset or summaries must be given")
    if ruleset is not None:
        head = indicator_vector(b, ruleset, scheme)
        source = FeatureSource.INDICATOR
    else:
        vec = summaries.entries.get(b.key)
        if vec is None:
            raise DataError(f"no summary vector for behaviour {b.key!r}")
        head = vec
        source = FeatureSource.SUMMARY
    action_vec = (embeddings.lookup(action) if action is not None
                  else np.zeros(embeddings.dim))
    return FeatureVector(clip_id=b.clip_id, object_label=b.object_label,
                         label=label, values=np.concatenate([head, action_vec]),
                         source=source, pair=pair)


def check_summary_coverage(behaviours: list[ObjectBehaviour],
                           summaries: EmbeddingTable) -> None:
    """Fail fast with the full list of behaviours lacking summary vectors."""
    missing = [b.key for b in behaviours if b.key not in summaries.entries]
    if missing:
        raise DataError(
            f"missing summary vectors for {len(missing)} behaviours: "
            + ", ".join(sorted(missing)))


def write_feature_csv(path, features: list[FeatureVector]) -> None:
    if not features:
        raise DataError("no features to write")
    width = len(features[0].values)
    if any(len(f.values) != width for f in features):
        raise DataError("inconsistent feature lengths")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["clip_id", "object", "label"]
                        + [f"v{i}" for i in range(width)])
        for f in features:
            writer.writerow([f.clip_id, f.object_label, f.label]
                            + [f"{v:.9g}" for v in f.values])


def read_feature_csv(path, pair: tuple[str, str],
                     source: FeatureSource) -> list[FeatureVector]:
    out: list[FeatureVector] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != ["clip_id", "object", "label"]:
            raise DataError(f"{path}: bad feature CSV header")
        for row in reader:
            if not row:
                continue
            out.append(FeatureVector(
                clip_id=row[0], object_label=row[1], label=row[2],
                values=np.array([float(v) for v in row[3:]]),
                source=source, pair=pair))
    return out
