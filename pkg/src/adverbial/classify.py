"""Per-clip voting and the pairwise evaluation harness.

Evaluation units are (clip, label) entries: every adverb or antonym label
a test clip carries is judged once, against the majority vote over that
clip's per-object predictions. Snippet-level accuracy (one unit per
behaviour, classes balanced by repetition) is reported alongside, since
the two levels answer different questions.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field

from .errors import DataError
from .features import FeatureVector, balance_by_repetition
from .svm import SvmModel, predict_object

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClipPrediction:
    clip_id: str
    pair: tuple[str, str]
    votes: tuple[tuple[str, str], ...]  # (object_label, predicted class)
    final: str
    tie: bool


def majority_vote(clip_id: str, pair: tuple[str, str],
                  votes: list[tuple[str, str]]) -> ClipPrediction:
    """Strict majority; an exact tie resolves to the adverb (flagged)."""
    if not votes:
        raise DataError(f"clip {clip_id}: no object predictions to vote over")
    adverb, antonym = pair
    n_adv = sum(1 for _, cls in votes if cls == adverb)
    n_ant = len(votes) - n_adv
    tie = n_adv == n_ant
    final = adverb if n_adv >= n_ant else antonym
    return ClipPrediction(clip_id=clip_id, pair=pair, votes=tuple(votes),
                          final=final, tie=tie)


@dataclass
class PairResult:
    pair: tuple[str, str]
    n_clip_units: int
    clip_correct: int
    n_snippets: int
    snippet_correct: int
    predictions: list[ClipPrediction] = field(default_factory=list)

    @property
    def clip_accuracy(self) -> float:
        return self.clip_correct / self.n_clip_units

    @property
    def snippet_accuracy(self) -> float:
        return self.snippet_correct / self.n_snippets


@dataclass
class EvalReport:
    results: list[PairResult]
    skipped: list[tuple[str, str]]
    config_fingerprint: str

    @property
    def average_clip_accuracy(self) -> float:
        accs = [r.clip_accuracy for r in self.results]
        return sum(accs) / len(accs) if accs else 0.0

    @property
    def average_snippet_accuracy(self) -> float:
        accs = [r.snippet_accuracy for r in self.results]
        return sum(accs) / len(accs) if accs else 0.0


def config_fingerprint(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def evaluate_pair(model: SvmModel,
                  features: list[FeatureVector]) -> PairResult | None:
    """Score one pair's test features; None when there are no units."""
    pair = model.pair
    if not features:
        return None
    # One prediction per (clip, object); rows only differ by unit label.
    predicted: dict[tuple[str, str], str] = {}
    objects_by_clip: dict[str, list[str]] = {}
    for f in features:
        key = (f.clip_id, f.object_label)
        if key not in predicted:
            predicted[key] = predict_object(model, f.values)
            objects_by_clip.setdefault(f.clip_id, []).append(f.object_label)

    snippet_units: dict[str, list[bool]] = {pair[0]: [], pair[1]: []}
    clip_units: dict[tuple[str, str], None] = {}
    for f in features:
        if f.label not in snippet_units:
            raise DataError(f"label {f.label!r} not in pair {pair}")
        snippet_units[f.label].append(predicted[(f.clip_id, f.object_label)]
                                      == f.label)
        clip_units[(f.clip_id, f.label)] = None

    predictions = []
    clip_correct = 0
    voted: dict[str, ClipPrediction] = {}
    for clip_id, label in clip_units:
        if clip_id not in voted:
            votes = [(obj, predicted[(clip_id, obj)])
                     for obj in objects_by_clip[clip_id]]
            voted[clip_id] = majority_vote(clip_id, pair, votes)
        predictions.append(voted[clip_id])
        if voted[clip_id].final == label:
            clip_correct += 1

    adv_hits, ant_hits = snippet_units[pair[0]], snippet_units[pair[1]]
    if adv_hits and ant_hits:
        adv_hits, ant_hits = balance_by_repetition(adv_hits, ant_hits)
    balanced = adv_hits + ant_hits
    return PairResult(pair=pair,
                      n_clip_units=len(clip_units),
                      clip_correct=clip_correct,
                      n_snippets=len(balanced),
                      snippet_correct=sum(balanced),
                      predictions=predictions)


def evaluate(models: dict[tuple[str, str], SvmModel],
             features_by_pair: dict[tuple[str, str], list[FeatureVector]],
             fingerprint: str) -> EvalReport:
    results = []
    skipped = []
    for pair, model in models.items():
        result = evaluate_pair(model, features_by_pair.get(pair, []))
        if result is None:
            log.warning("pair %s/%s has no test clips; excluded from the "
                        "average", *pair)
            skipped.append(pair)
        else:
            results.append(result)
    return EvalReport(results=results, skipped=skipped,
                      config_fingerprint=fingerprint)


def render_report_text(report: EvalReport) -> str:
    header = (f"{'pair':<28} {'clips':>6} {'clip_acc':>9} "
              f"{'snippets':>9} {'snip_acc':>9}")
    lines = [header, "-" * len(header)]
    for r in report.results:
        name = f"{r.pair[0]}/{r.pair[1]}"
        lines.append(f"{name:<28} {r.n_clip_units:>6} "
                     f"{100.0 * r.clip_accuracy:>8.2f}% "
                     f"{r.n_snippets:>9} {100.0 * r.snippet_accuracy:>8.2f}%")
    for pair in report.skipped:
        lines.append(f"{pair[0]}/{pair[1]:<20} (no test clips)")
    lines.append("-" * len(header))
    lines.append(f"{'average':<28} {'':>6} "
                 f"{100.0 * report.average_clip_accuracy:>8.2f}% "
                 f"{'':>9} {100.0 * report.average_snippet_accuracy:>8.2f}%")
    lines.append(f"config: {report.config_fingerprint}")
    return "".join(line + "\n" for line in lines)


def render_report_csv(report: EvalReport) -> str:
    lines = ["pair,adverb,antonym,clips,clip_accuracy,snippets,snippet_accuracy"]
    for r in report.results:
        lines.append(f"{r.pair[0]}/{r.pair[1]},{r.pair[0]},{r.pair[1]},"
                     f"{r.n_clip_units},{r.clip_accuracy:.6f},"
                     f"{r.n_snippets},{r.snippet_accuracy:.6f}")
    lines.append(f"average,,,,{report.average_clip_accuracy:.6f},,"
                 f"{report.average_snippet_accuracy:.6f}")
    return "".join(line + "\n" for line in lines)
