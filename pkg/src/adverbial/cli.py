"""Command-line entry point orchestrating the pipeline stage by stage.

Subcommands: extract, emit, induce, featurize, train, predict, evaluate,
flatten, mask and pipeline (which chains extract through evaluate over an
observation corpus). Outputs are written atomically and every stage drops
a manifest recording its configuration fingerprint and input digests, so
re-running a stage with identical inputs and seed is byte-identical.

Exit codes: 0 ok, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import random
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import asp, flatten as flat
from .behaviour import ObjectBehaviour
from .buckets import BucketScheme, DEFAULT_SCHEME, format_scheme, load_scheme
from .classify import (EvalReport, config_fingerprint, evaluate,
                       majority_vote, render_report_csv, render_report_text)
from .config import (ClipMeta, DEFAULT_PAIRS, TRAIN_FRACTION, antonym_of,
                     load_clips, load_config_file, load_pairs, pair_slug)
from .errors import DataError, InsufficientDataError
from .extraction import DEFAULT_WINDOW, extract_behaviours
from .features import (EmbeddingTable, FeatureSource, FeatureVector,
                       balance_by_repetition, build_feature,
                       check_summary_coverage, load_embeddings,
                       read_feature_csv, write_feature_csv)
from .induction import InducedRuleSet, collect_indicators, sample_batches
from .observations import load_flow_raster, load_observations, resolve_flow
from .rules import format_rule_line, read_rules
from .seeding import derive_seed
from .svm import dump_model, load_model, predict_object, train_svm

log = logging.getLogger("adverbial")


# ---------------------------------------------------------------------------
# atomic output + manifests

def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(target: Path, stage: str, config: dict,
                   inputs: list[Path]) -> None:
    """Manifest beside the stage output: config fingerprint, input digests."""
    digests = {Path(p).name: sha256_file(p) for p in sorted(inputs)}
    payload = {
        "stage": stage,
        "config": config,
        "config_fingerprint": config_fingerprint(config),
        "inputs": digests,
    }
    atomic_write(target, json.dumps(payload, indent=1, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# shared loading helpers

def _scheme_from(args) -> BucketScheme:
    return load_scheme(args.scheme) if args.scheme else DEFAULT_SCHEME


def _pairs_from(args) -> list[tuple[str, str]]:
    return load_pairs(args.pairs) if args.pairs else list(DEFAULT_PAIRS)


def _gamma_from(args) -> float | None:
    if args.gamma is None or args.gamma == "scale":
        return None
    try:
        return float(args.gamma)
    except ValueError:
        raise DataError(f"--gamma must be a number or 'scale', got {args.gamma!r}")


def load_programs(asp_dir: Path) -> list[tuple[asp.AspProgram,
                                               list[ObjectBehaviour]]]:
    paths = sorted(Path(asp_dir).glob("*.lp"))
    if not paths:
        raise DataError(f"no .lp programs found in {asp_dir}")
    out = []
    for path in paths:
        program = asp.load_program(path)
        out.append((program, asp.behaviours_from_program(program)))
    return out


def load_units(path: Path) -> set[tuple[str, str]]:
    units = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path} line {line_no}: expected clip<TAB>label")
            units.add((parts[0], parts[1]))
    return units


def _matching_label(tag: tuple[str, str],
                    pair: tuple[str, str]) -> str | None:
    if tag == pair:
        return pair[0]
    if tag == (pair[1], pair[0]):
        return pair[1]
    return None


def behaviours_by_class(
        programs: list[tuple[asp.AspProgram, list[ObjectBehaviour]]],
        pair: tuple[str, str],
        units: set[tuple[str, str]] | None) -> tuple[list[ObjectBehaviour],
                                                     list[ObjectBehaviour]]:
    positives: list[ObjectBehaviour] = []
    negatives: list[ObjectBehaviour] = []
    for program, behaviours in programs:
        for tag in program.adverb_labels:
            label = _matching_label(tag, pair)
            if label is None:
                continue
            if units is not None and (program.clip_id, label) not in units:
                continue
            target = positives if label == pair[0] else negatives
            target.extend(behaviours)
    return positives, negatives


def features_for_pair(
        programs: list[tuple[asp.AspProgram, list[ObjectBehaviour]]],
        pair: tuple[str, str],
        embeddings: EmbeddingTable,
        scheme: BucketScheme,
        ruleset: InducedRuleSet | None = None,
        summaries: EmbeddingTable | None = None,
        units: set[tuple[str, str]] | None = None) -> list[FeatureVector]:
    features: list[FeatureVector] = []
    for program, behaviours in programs:
        for tag in program.adverb_labels:
            label = _matching_label(tag, pair)
            if label is None:
                continue
            if units is not None and (program.clip_id, label) not in units:
                continue
            for b in behaviours:
                features.append(build_feature(
                    b, label, pair, program.action, embeddings, scheme,
                    ruleset=ruleset, summaries=summaries))
    return features


def load_ruleset(rules_dir: Path, pair: tuple[str, str]) -> InducedRuleSet:
    path = Path(rules_dir) / f"{pair_slug(pair)}.rules"
    if not path.exists():
        raise DataError(f"missing rules file {path}")
    ruleset = InducedRuleSet(pair=pair)
    for line_pair, rule in read_rules(path):
        if line_pair != pair:
            raise DataError(f"{path}: rule tagged {line_pair}, expected {pair}")
        ruleset.rules.append(rule)
    return ruleset


# ---------------------------------------------------------------------------
# stage: extract

def run_extract(obs_path: Path, flow_path: Path | None, out_path: Path,
                scheme: BucketScheme, window: int, clip_id: str,
                action: str | None,
                label_tags: list[tuple[str, str]]) -> None:
    frames = load_observations(obs_path)
    raster = load_flow_raster(flow_path) if flow_path else None
    frames = resolve_flow(frames, raster)
    result = extract_behaviours(frames, scheme, window, clip_id)
    program = asp.program_from_behaviours(
        clip_id, result.behaviours, asp.generate_background(scheme),
        adverb_labels=label_tags, action=action)
    atomic_write(out_path, asp.render_program(program))


def cmd_extract(args) -> int:
    scheme = _scheme_from(args)
    pairs = _pairs_from(args)
    clip_id = args.clip or Path(args.obs).stem
    labels = [l.strip() for l in (args.labels or "").split(",") if l.strip()]
    tags = [(l, antonym_of(l, pairs)) for l in labels]
    run_extract(Path(args.obs), Path(args.flow) if args.flow else None,
                Path(args.out), scheme, args.window, clip_id, args.action, tags)
    inputs = [Path(args.obs)] + ([Path(args.flow)] if args.flow else [])
    write_manifest(Path(str(args.out) + ".manifest.json"), "extract",
                   {"window": args.window, "clip": clip_id,
                    "action": args.action, "labels": labels,
                    "scheme": format_scheme(scheme)}, inputs)
    return 0


# ---------------------------------------------------------------------------
# stage: emit (validate + canonicalize program files)

def cmd_emit(args) -> int:
    src = Path(args.src)
    paths = sorted(src.glob("*.lp")) if src.is_dir() else [src]
    if not paths:
        raise DataError(f"no .lp programs found in {src}")
    out_dir = Path(args.out)
    for path in paths:
        program = asp.load_program(path)
        program.validate()
        atomic_write(out_dir / path.name, asp.render_program(program))
    write_manifest(out_dir / "emit.manifest.json", "emit", {}, paths)
    return 0


# ---------------------------------------------------------------------------
# stage: induce

def run_induce(programs, pairs, scheme, seed, out_dir: Path,
               units: set[tuple[str, str]] | None) -> None:
    for pair in pairs:
        positives, negatives = behaviours_by_class(programs, pair, units)
        out_path = out_dir / f"{pair_slug(pair)}.rules"
        try:
            positives, negatives = balance_by_repetition(positives, negatives)
            batches = sample_batches(positives, negatives, pair,
                                     derive_seed(seed, "induce", *pair))
        except (InsufficientDataError, DataError) as exc:
            log.warning("pair %s/%s: %s; writing empty rule set", *pair, exc)
            atomic_write(out_path, "")
            continue
        ruleset = collect_indicators(batches, scheme, pair=pair)
        atomic_write(out_path, "".join(
            format_rule_line(pair, rule) + "\n" for rule in ruleset.rules))
        log.info("pair %s/%s: %d batches, %d rules %s", pair[0], pair[1],
                 len(batches), len(ruleset.rules), ruleset.bias_counts())


def cmd_induce(args) -> int:
    scheme = _scheme_from(args)
    pairs = _pairs_from(args)
    programs = load_programs(Path(args.train))
    units = load_units(Path(args.units)) if args.units else None
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_induce(programs, pairs, scheme, args.seed, out_dir, units)
    write_manifest(out_dir / "induce.manifest.json", "induce",
                   {"seed": args.seed, "pairs": [list(p) for p in pairs],
                    "scheme": format_scheme(scheme)},
                   sorted(Path(args.train).glob("*.lp")))
    return 0


# ---------------------------------------------------------------------------
# stage: featurize

def run_featurize(programs, pairs, scheme, embeddings, out_dir: Path,
                  rules_dir: Path | None, summaries: EmbeddingTable | None,
                  units: set[tuple[str, str]] | None) -> None:
    for pair in pairs:
        ruleset = load_ruleset(rules_dir, pair) if rules_dir else None
        features = features_for_pair(programs, pair, embeddings, scheme,
                                     ruleset=ruleset, summaries=summaries,
                                     units=units)
        if not features:
            log.warning("pair %s/%s: no behaviours to featurize", *pair)
            continue
        out_path = out_dir / f"{pair_slug(pair)}.csv"
        out_dir.mkdir(parents=True, exist_ok=True)
        write_feature_csv(out_path, features)


def cmd_featurize(args) -> int:
    if bool(args.rules) == bool(args.summary_vectors):
        raise DataError("pass exactly one of --rules or --summary-vectors")
    scheme = _scheme_from(args)
    pairs = _pairs_from(args)
    programs = load_programs(Path(args.asp))
    embeddings = load_embeddings(args.embeddings)
    units = load_units(Path(args.units)) if args.units else None
    summaries = None
    if args.summary_vectors:
        summaries = flat.import_summary_vectors(args.summary_vectors)
        check_summary_coverage([b for _, bs in programs for b in bs], summaries)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_featurize(programs, pairs, scheme, embeddings, out_dir,
                  Path(args.rules) if args.rules else None, summaries, units)
    inputs = sorted(Path(args.asp).glob("*.lp")) + [Path(args.embeddings)]
    write_manifest(out_dir / "featurize.manifest.json", "featurize",
                   {"pairs": [list(p) for p in pairs],
                    "source": "summary" if summaries else "indicator",
                    "scheme": format_scheme(scheme)}, inputs)
    return 0


# ---------------------------------------------------------------------------
# stage: train

def run_train(features_dir: Path, pairs, out_dir: Path, C: float,
              gamma: float | None, seed: int) -> None:
    for pair in pairs:
        csv_path = features_dir / f"{pair_slug(pair)}.csv"
        if not csv_path.exists():
            log.warning("pair %s/%s: no feature file %s; skipping", *pair,
                        csv_path)
            continue
        rows = read_feature_csv(csv_path, pair, FeatureSource.INDICATOR)
        adv = [r for r in rows if r.label == pair[0]]
        ant = [r for r in rows if r.label == pair[1]]
        if not adv or not ant:
            log.warning("pair %s/%s: single-class training data; skipping",
                        *pair)
            continue
        adv, ant = balance_by_repetition(adv, ant)
        rows = adv + ant
        X = np.stack([r.values for r in rows])
        labels = [r.label for r in rows]
        model = train_svm(X, labels, pair, C=C, gamma=gamma,
                          seed=derive_seed(seed, "train", *pair))
        atomic_write(out_dir / f"{pair_slug(pair)}.model.json",
                     dump_model(model))
        log.info("pair %s/%s: trained on %d rows (%d support vectors)",
                 pair[0], pair[1], len(rows), len(model.coefficients))


def cmd_train(args) -> int:
    pairs = _pairs_from(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_train(Path(args.features), pairs, out_dir, args.C,
              _gamma_from(args), args.seed)
    write_manifest(out_dir / "train.manifest.json", "train",
                   {"C": args.C, "gamma": args.gamma, "seed": args.seed,
                    "pairs": [list(p) for p in pairs]},
                   sorted(Path(args.features).glob("*.csv")))
    return 0


# ---------------------------------------------------------------------------
# stage: predict / evaluate

def _load_models(models_dir: Path, pairs) -> dict[tuple[str, str], object]:
    missing = []
    models = {}
    for pair in pairs:
        path = models_dir / f"{pair_slug(pair)}.model.json"
        if not path.exists():
            missing.append(path.name)
            continue
        models[pair] = load_model(path)
    if missing:
        raise DataError(
            "missing trained model files in "
            f"{models_dir}: {', '.join(missing)} (run the train stage first)")
    return models


def cmd_predict(args) -> int:
    pairs = _pairs_from(args)
    models = _load_models(Path(args.models), pairs)
    lines = ["pair,clip_id,object,predicted,clip_final,tie"]
    for pair in pairs:
        csv_path = Path(args.features) / f"{pair_slug(pair)}.csv"
        if not csv_path.exists():
            continue
        rows = read_feature_csv(csv_path, pair, FeatureSource.INDICATOR)
        predicted: dict[tuple[str, str], str] = {}
        by_clip: dict[str, list[str]] = {}
        for r in rows:
            key = (r.clip_id, r.object_label)
            if key not in predicted:
                predicted[key] = predict_object(models[pair], r.values)
                by_clip.setdefault(r.clip_id, []).append(r.object_label)
        for clip_id in by_clip:
            votes = [(obj, predicted[(clip_id, obj)])
                     for obj in by_clip[clip_id]]
            clip = majority_vote(clip_id, pair, votes)
            for obj, cls in votes:
                lines.append(f"{pair_slug(pair)},{clip_id},{obj},{cls},"
                             f"{clip.final},{int(clip.tie)}")
    atomic_write(Path(args.out), "".join(line + "\n" for line in lines))
    return 0


def run_evaluate(models, features_by_pair, config: dict,
                 report_path: Path) -> EvalReport:
    report = evaluate(models, features_by_pair, config_fingerprint(config))
    text = render_report_text(report)
    atomic_write(report_path, text)
    atomic_write(report_path.with_suffix(report_path.suffix + ".csv"),
                 render_report_csv(report))
    sys.stdout.write(text)
    return report


def cmd_evaluate(args) -> int:
    pairs = _pairs_from(args)
    scheme = _scheme_from(args)
    models = _load_models(Path(args.models), pairs)
    features_by_pair: dict[tuple[str, str], list[FeatureVector]] = {}
    if args.features:
        for pair in pairs:
            csv_path = Path(args.features) / f"{pair_slug(pair)}.csv"
            if csv_path.exists():
                features_by_pair[pair] = read_feature_csv(
                    csv_path, pair, FeatureSource.INDICATOR)
    else:
        if not args.asp or not args.embeddings:
            raise DataError("evaluate needs --features, or --asp with "
                            "--embeddings and --rules/--summary-vectors")
        if bool(args.rules) == bool(args.summary_vectors):
            raise DataError("pass exactly one of --rules or --summary-vectors")
        programs = load_programs(Path(args.asp))
        embeddings = load_embeddings(args.embeddings)
        units = load_units(Path(args.units)) if args.units else None
        summaries = None
        if args.summary_vectors:
            summaries = flat.import_summary_vectors(args.summary_vectors)
            check_summary_coverage([b for _, bs in programs for b in bs],
                                   summaries)
        for pair in pairs:
            ruleset = (load_ruleset(Path(args.rules), pair)
                       if args.rules else None)
            features_by_pair[pair] = features_for_pair(
                programs, pair, embeddings, scheme, ruleset=ruleset,
                summaries=summaries, units=units)
    config = {"pairs": [list(p) for p in pairs],
              "source": "summary" if args.summary_vectors else "indicator",
              "scheme": format_scheme(scheme)}
    run_evaluate(models, features_by_pair, config, Path(args.report))
    return 0


# ---------------------------------------------------------------------------
# stage: flatten / mask

def cmd_flatten(args) -> int:
    programs = load_programs(Path(args.asp))
    flats = [flat.flatten(b) for _, behaviours in programs
             for b in behaviours]
    lines = [f"{f.key}\t{f.text}" for f in flats]
    atomic_write(Path(args.out), "".join(line + "\n" for line in lines))
    write_manifest(Path(str(args.out) + ".manifest.json"), "flatten", {},
                   sorted(Path(args.asp).glob("*.lp")))
    return 0


def cmd_mask(args) -> int:
    flats = flat.read_corpus(Path(args.corpus))
    samples = [flat.mask_values(f, rate=args.rate, seed=args.seed)
               for f in flats]
    lines = []
    for s in samples:
        targets = " ".join(f"{pos}:{word}" for pos, word in s.targets)
        lines.append(f"{s.key}\t{s.text}\t{targets}")
    atomic_write(Path(args.out), "".join(line + "\n" for line in lines))
    write_manifest(Path(str(args.out) + ".manifest.json"), "mask",
                   {"rate": args.rate, "seed": args.seed},
                   [Path(args.corpus)])
    return 0


# ---------------------------------------------------------------------------
# pipeline

def stratified_split(clips: list[ClipMeta], fraction: float,
                     seed: int) -> tuple[list[tuple[str, str]],
                                         list[tuple[str, str]]]:
    """70/30 unit split of (clip, label) entries, stratified by label."""
    by_label: dict[str, list[str]] = {}
    for clip in clips:
        for label in clip.labels:
            by_label.setdefault(label, []).append(clip.clip_id)
    train: list[tuple[str, str]] = []
    test: list[tuple[str, str]] = []
    for label in sorted(by_label):
        ids = sorted(by_label[label])
        rng = random.Random(derive_seed(seed, "split", label))
        rng.shuffle(ids)
        n_train = int(len(ids) * fraction)
        train.extend((cid, label) for cid in ids[:n_train])
        test.extend((cid, label) for cid in ids[n_train:])
    return sorted(train), sorted(test)


def _resolve_pipeline_settings(args) -> None:
    """Merge the key/value config file under explicit flags, then apply
    built-in defaults and check the required settings."""
    config = load_config_file(args.config) if args.config else {}
    def take(name, key, cast=str):
        if getattr(args, name) is None and key in config:
            setattr(args, name, cast(config[key]))
    take("obs", "obs")
    take("clips", "clips")
    take("embeddings", "embeddings")
    take("work", "work")
    take("seed", "seed", int)
    take("window", "window", int)
    take("C", "C", float)
    take("gamma", "gamma")
    take("train_fraction", "train_fraction", float)
    take("scheme", "scheme")
    take("pairs", "pairs")
    if args.window is None:
        args.window = DEFAULT_WINDOW
    if args.C is None:
        args.C = 1.0
    if args.gamma is None:
        args.gamma = "scale"
    if args.train_fraction is None:
        args.train_fraction = TRAIN_FRACTION
    missing = [name for name in ("obs", "clips", "embeddings", "work", "seed")
               if getattr(args, name) is None]
    if missing:
        raise DataError("pipeline needs " +
                        ", ".join(f"--{m}" for m in missing) +
                        " (as flags or config-file keys)")


def cmd_pipeline(args) -> int:
    _resolve_pipeline_settings(args)
    scheme = _scheme_from(args)
    pairs = _pairs_from(args)
    obs_dir = Path(args.obs)
    work = Path(args.work)
    clips = load_clips(args.clips)
    gamma = _gamma_from(args)

    # extract + emit
    asp_dir = work / "asp"
    for clip in clips:
        obs_path = obs_dir / f"{clip.clip_id}.jsonl"
        if not obs_path.exists():
            raise DataError(f"missing observation file {obs_path}")
        flow_path = obs_dir / f"{clip.clip_id}.flow"
        tags = [(l, antonym_of(l, pairs)) for l in clip.labels]
        run_extract(obs_path, flow_path if flow_path.exists() else None,
                    asp_dir / f"{clip.clip_id}.lp", scheme, args.window,
                    clip.clip_id, clip.action, tags)
    programs = load_programs(asp_dir)
    for program, _ in programs:
        program.validate()

    # split
    train_units, test_units = stratified_split(clips, args.train_fraction,
                                               args.seed)
    split_dir = work / "split"
    atomic_write(split_dir / "train.tsv", "".join(
        f"{c}\t{l}\n" for c, l in train_units))
    atomic_write(split_dir / "test.tsv", "".join(
        f"{c}\t{l}\n" for c, l in test_units))

    # induce on the training units
    rules_dir = work / "rules"
    rules_dir.mkdir(parents=True, exist_ok=True)
    run_induce(programs, pairs, scheme, args.seed, rules_dir,
               set(train_units))

    # featurize both splits
    embeddings = load_embeddings(args.embeddings)
    for name, units in (("train", set(train_units)), ("test", set(test_units))):
        run_featurize(programs, pairs, scheme, embeddings,
                      work / "features" / name, rules_dir, None, units)

    # train
    models_dir = work / "models"
    models_dir.mkdir(parents=True, exist_ok=True)
    run_train(work / "features" / "train", pairs, models_dir, args.C,
              gamma, args.seed)

    # evaluate
    models = _load_models(models_dir, [
        pair for pair in pairs
        if (models_dir / f"{pair_slug(pair)}.model.json").exists()])
    features_by_pair = {}
    for pair in models:
        csv_path = work / "features" / "test" / f"{pair_slug(pair)}.csv"
        if csv_path.exists():
            features_by_pair[pair] = read_feature_csv(
                csv_path, pair, FeatureSource.INDICATOR)
    config = {"seed": args.seed, "window": args.window, "C": args.C,
              "gamma": args.gamma, "train_fraction": args.train_fraction,
              "pairs": [list(p) for p in pairs],
              "scheme": format_scheme(scheme)}
    run_evaluate(models, features_by_pair, config, work / "report.txt")
    write_manifest(work / "pipeline.manifest.json", "pipeline", config,
                   [args.clips, args.embeddings])
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adverbial",
        description="Object-behaviour extraction, rule induction and "
                    "adverb-vs-antonym classification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, scheme=True, pairs=True):
        if scheme:
            p.add_argument("--scheme", help="bucket scheme config file")
        if pairs:
            p.add_argument("--pairs", help="pairs config file (adverb/antonym "
                                           "per line)")

    p = sub.add_parser("extract", help="observations -> behaviour program")
    p.add_argument("--obs", required=True, help="observation JSONL file")
    p.add_argument("--flow", help="flow raster sidecar")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--out", required=True, help="output .lp path")
    p.add_argument("--clip", help="clip id (default: observation file stem)")
    p.add_argument("--action", help="clip action token")
    p.add_argument("--labels", help="comma-separated adverb labels")
    add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("emit", help="validate and canonicalize .lp files")
    p.add_argument("--src", required=True, help=".lp file or directory")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("induce", help="learn indicator rules per pair")
    p.add_argument("--train", required=True, help="directory of training .lp")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output rules directory")
    p.add_argument("--units", help="restrict to clip<TAB>label units file")
    add_common(p)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("featurize", help="behaviours -> feature CSVs")
    p.add_argument("--asp", required=True, help="directory of .lp programs")
    p.add_argument("--rules", help="rules directory (indicator features)")
    p.add_argument("--summary-vectors", help="summary vector file "
                                             "(summary features)")
    p.add_argument("--embeddings", required=True, help="action embeddings file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--units", help="restrict to clip<TAB>label units file")
    add_common(p)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("train", help="train one SVM per pair")
    p.add_argument("--features", required=True, help="feature CSV directory")
    p.add_argument("--out", required=True, help="output model directory")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--gamma", default="scale", help="rbf gamma or 'scale'")
    p.add_argument("--seed", type=int, required=True)
    add_common(p, scheme=False)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="per-object and voted predictions")
    p.add_argument("--models", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    add_common(p, scheme=False)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="accuracy report over test features")
    p.add_argument("--models", required=True)
    p.add_argument("--features", help="precomputed feature CSV directory")
    p.add_argument("--asp", help="test .lp directory (featurize on the fly)")
    p.add_argument("--rules", help="rules directory")
    p.add_argument("--summary-vectors", help="summary vector file")
    p.add_argument("--embeddings", help="action embeddings file")
    p.add_argument("--units", help="restrict to clip<TAB>label units file")
    p.add_argument("--report", required=True, help="report output path")
    add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("flatten", help="programs -> flat text corpus")
    p.add_argument("--asp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("mask", help="flat corpus -> masked corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--rate", type=float, default=0.2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("pipeline", help="extract -> evaluate end to end")
    p.add_argument("--config", help="key/value config file; flags override")
    p.add_argument("--obs", help="observation directory")
    p.add_argument("--clips", help="clips.tsv metadata file")
    p.add_argument("--embeddings")
    p.add_argument("--work", help="working directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--C", type=float)
    p.add_argument("--gamma")
    p.add_argument("--train-fraction", type=float)
    add_common(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
