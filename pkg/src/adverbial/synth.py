"""Synthetic observation corpora with planted class signals.

Each adverb/antonym pair is assigned one signal family: the two classes
differ in exactly one behaviour property (flow magnitude, flow angle,
operation area, or frame placement) while everything else is held
constant, so rule induction has a unique planted explanation to recover.
Pairs with the ``none`` signal emit identical behaviours for both classes
and must yield no rules at all.

Clips contain two moving signal objects (consistent votes), often a slow
distractor that the salience filter must drop, and occasionally a
low-confidence detection exercising the unknown band. Every tenth clip
ships its signal flow in a raster sidecar instead of inline statistics.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .behaviour import BehaviourStep, ObjectBehaviour
from .config import DEFAULT_PAIRS, ClipMeta
from .errors import DataError
from .features import format_embeddings
from .observations import FlowRaster, write_flow_raster
from .seeding import derive_seed

ACTIONS = ("cook", "run", "dance", "swim", "lift", "paint")
SIGNAL_LABELS = ("person", "dog", "car", "ball", "bicycle", "cat")
DISTRACTOR_LABEL = "chair"

# (magnitude, angle, area, center) per window; one entry per class, cycled
# through window-by-window.
@dataclass(frozen=True)
class ClassRecipe:
    mags: tuple[float, ...] = (7.5,)
    angles: tuple[float, ...] = (90.0,)
    areas: tuple[float, ...] = (0.08,)
    centers: tuple[tuple[float, float], ...] = ((0.3, 0.3),)


@dataclass(frozen=True)
class PairSignal:
    kind: str  # magnitude | angle | area | cell | none
    adverb: ClassRecipe
    antonym: ClassRecipe


def _angle_signal(adverb_angles, antonym_angles) -> PairSignal:
    return PairSignal("angle",
                      ClassRecipe(angles=adverb_angles),
                      ClassRecipe(angles=antonym_angles))


DEFAULT_SIGNALS: dict[tuple[str, str], PairSignal] = {
    ("upwards", "downwards"): _angle_signal((135.0, 90.0, 45.0),
                                            (225.0, 270.0, 315.0)),
    ("forwards", "backwards"): _angle_signal((0.0,), (180.0,)),
    ("outdoor", "indoor"): PairSignal(
        "area",
        ClassRecipe(areas=(0.2, 0.5), centers=((0.5, 0.5),)),
        ClassRecipe(areas=(0.01, 0.03), centers=((0.5, 0.5),))),
    ("slowly", "quickly"): PairSignal(
        "magnitude",
        ClassRecipe(mags=(2.0, 3.5)),
        ClassRecipe(mags=(27.0, 28.5))),
    ("gently", "firmly"): PairSignal(
        "magnitude",
        ClassRecipe(mags=(6.5, 12.5)),
        ClassRecipe(mags=(2.0, 22.0))),
    ("out", "in"): PairSignal(
        "cell",
        ClassRecipe(centers=((0.15, 0.3), (0.35, 0.7))),
        ClassRecipe(centers=((0.65, 0.3), (0.85, 0.7)))),
    ("partially", "completely"): PairSignal(
        "area",
        ClassRecipe(areas=(0.01, 0.04), centers=((0.5, 0.5),)),
        ClassRecipe(areas=(0.1, 0.5), centers=((0.5, 0.5),))),
    ("properly", "improperly"): PairSignal(
        "cell",
        ClassRecipe(centers=((0.3, 0.2), (0.7, 0.4))),
        ClassRecipe(centers=((0.3, 0.6), (0.7, 0.85)))),
    ("periodically", "continuously"): PairSignal(
        "none", ClassRecipe(), ClassRecipe()),
    ("instantly", "gradually"): PairSignal(
        "none", ClassRecipe(), ClassRecipe()),
    ("off", "on"): PairSignal("none", ClassRecipe(), ClassRecipe()),
}

PLANTED_PAIRS = tuple(pair for pair, sig in DEFAULT_SIGNALS.items()
                      if sig.kind != "none")
INSEPARABLE_PAIRS = tuple(pair for pair, sig in DEFAULT_SIGNALS.items()
                          if sig.kind == "none")


@dataclass
class SynthConfig:
    n_clips: int = 200
    seed: int = 0
    window: int = 5
    pairs: tuple[tuple[str, str], ...] = DEFAULT_PAIRS
    signals: dict[tuple[str, str], PairSignal] = field(
        default_factory=lambda: dict(DEFAULT_SIGNALS))
    min_steps: int = 4
    max_steps: int = 8
    raster_every: int = 10
    embedding_dim: int = 8


def _bbox_at(center: tuple[float, float], area: float,
             dx: float = 0.0) -> tuple[float, float, float, float]:
    half = area ** 0.5 / 2.0
    cx, cy = center[0] + dx, center[1]
    return (round(cx - half, 4), round(cy - half, 4),
            round(cx + half, 4), round(cy + half, 4))


@dataclass(frozen=True)
class SynthClip:
    meta: ClipMeta
    frames: list[dict]
    raster: FlowRaster | None


def _window_props(recipe: ClassRecipe, w: int):
    return (recipe.mags[w % len(recipe.mags)],
            recipe.angles[w % len(recipe.angles)],
            recipe.areas[w % len(recipe.areas)],
            recipe.centers[w % len(recipe.centers)])


def build_clip(clip_id: str, pair: tuple[str, str], label: str,
               signal: PairSignal, config: SynthConfig) -> SynthClip:
    rng = random.Random(derive_seed(config.seed, "clip", clip_id))
    recipe = signal.adverb if label == pair[0] else signal.antonym
    n_steps = (6 if signal.kind == "none"
               else rng.randint(config.min_steps, config.max_steps))
    action = rng.choice(ACTIONS)
    labels = rng.sample(SIGNAL_LABELS, 3)
    with_distractor = rng.random() < 0.6
    with_unknown = rng.random() < 0.3
    use_raster = (signal.kind != "none"
                  and int(clip_id.removeprefix("clip")) % config.raster_every == 0)

    frames: list[dict] = []
    raster_mag = np.zeros((n_steps * config.window, 16, 16))
    raster_ang = np.zeros_like(raster_mag)
    for w in range(n_steps):
        mag, ang, area, center = _window_props(recipe, w)
        for k in range(config.window):
            frame_index = w * config.window + k
            dets = []
            for obj_i, obj in enumerate(labels):
                det = {"label": obj, "confidence": 0.9,
                       "bbox": list(_bbox_at(center, area, dx=0.02 * obj_i))}
                if not use_raster:
                    det["flow_mag"] = mag
                    det["flow_ang"] = ang
                dets.append(det)
            if with_distractor:
                dets.append({"label": DISTRACTOR_LABEL, "confidence": 0.85,
                             "bbox": [0.45, 0.45, 0.55, 0.55],
                             "flow_mag": 0.05, "flow_ang": 0.0})
            if with_unknown and k == 0:
                dets.append({"label": "blob", "confidence": 0.4,
                             "bbox": [0.05, 0.05, 0.15, 0.15],
                             "flow_mag": 6.0, "flow_ang": 45.0})
                dets.append({"label": "smudge", "confidence": 0.2,
                             "bbox": [0.9, 0.9, 0.95, 0.95],
                             "flow_mag": 1.0, "flow_ang": 10.0})
            frames.append({"frame": frame_index, "detections": dets})
            raster_mag[frame_index, :, :] = mag
            raster_ang[frame_index, :, :] = ang
    raster = (FlowRaster(width=16, height=16, magnitudes=raster_mag,
                         angles=raster_ang) if use_raster else None)
    meta = ClipMeta(clip_id=clip_id, action=action, labels=(label,))
    return SynthClip(meta=meta, frames=frames, raster=raster)


def generate_corpus(out_dir: Path, config: SynthConfig) -> list[ClipMeta]:
    """Write obs/<clip>.jsonl (+ .flow), clips.tsv and embeddings.txt."""
    out_dir = Path(out_dir)
    obs_dir = out_dir / "obs"
    obs_dir.mkdir(parents=True, exist_ok=True)
    pairs = list(config.pairs)
    for pair in pairs:
        if pair not in config.signals:
            raise DataError(f"no planted signal defined for pair {pair}")

    # Planted pairs get two slots per cycle (rule induction needs the
    # training volume); inseparable pairs get one.
    cycle = list(pairs) + [p for p in pairs if config.signals[p].kind != "none"]
    occurrences: dict[tuple[str, str], int] = {p: 0 for p in pairs}
    metas = []
    for i in range(config.n_clips):
        pair = cycle[i % len(cycle)]
        label = pair[occurrences[pair] % 2]
        occurrences[pair] += 1
        clip_id = f"clip{i:04d}"
        clip = build_clip(clip_id, pair, label, config.signals[pair], config)
        metas.append(clip.meta)
        lines = [json.dumps(f, separators=(", ", ": ")) for f in clip.frames]
        (obs_dir / f"{clip_id}.jsonl").write_text(
            "".join(line + "\n" for line in lines), encoding="utf-8")
        if clip.raster is not None:
            write_flow_raster(obs_dir / f"{clip_id}.flow", clip.raster)

    tsv = "".join(f"{m.clip_id}\t{m.action}\t{','.join(m.labels)}\n"
                  for m in metas)
    (out_dir / "clips.tsv").write_text(tsv, encoding="utf-8")

    rng = random.Random(derive_seed(config.seed, "embeddings"))
    entries = {}
    for action in ACTIONS:
        raw = [rng.gauss(0.0, 1.0) for _ in range(config.embedding_dim)]
        norm = sum(v * v for v in raw) ** 0.5
        entries[action] = [round(v / norm, 4) for v in raw]
    (out_dir / "embeddings.txt").write_text(
        format_embeddings(entries, config.embedding_dim), encoding="utf-8")
    return metas


def identical_behaviour(clip_id: str, object_label: str,
                        n_steps: int = 6) -> ObjectBehaviour:
    """The point-mass behaviour used by inseparable-class fixtures."""
    steps = tuple(
        BehaviourStep(time_step=t, magnitude=7.5, sector="n",
                      area_bucket="medium", mip_bucket="small",
                      placement=(("top", "left"), ("bottom", "right"),
                                 ("top", "left")))
        for t in range(1, n_steps + 1))
    return ObjectBehaviour(object_label=object_label, clip_id=clip_id,
                           steps=steps)
