"""Window aggregation of observations into discrete object behaviours.

The delayed-capture frames are cut into non-overlapping windows of W
frames (a trailing partial window is kept iff it has at least ceil(W/2)
frames). Within each window an object survives the motion-salience filter
iff in at least ceil(W/2) of the window's frames its flow magnitude is >=
the mean magnitude over that frame's confident detections. Surviving
windows are aggregated (mean magnitude, circular-mean angle sector,
operation-area hull, movement-in-place ratio, 3-level placement of the
hull center) and discretized into behaviour steps numbered 1..K per
object.

Placement uses y-down screen coordinates (top = small y); flow angles
stay in the y-up mathematical convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .behaviour import PLACEMENT_LEVELS, BehaviourStep, ObjectBehaviour
from .buckets import BucketScheme, sector_of
from .errors import DataError
from .observations import (ConfidenceBand, Detection, FrameObservation,
                           UNKNOWN_LABEL, band_detection)

DEFAULT_WINDOW = 5


@dataclass(frozen=True)
class WindowAggregate:
    """Continuous per-window properties of one object, before bucketing."""

    time_step: int
    mean_mag: float
    mean_ang_sector: str
    operation_area: float
    movement_in_place: float
    placement: tuple[tuple[str, str], ...]
    frames_present: int

    def __post_init__(self) -> None:
        if self.operation_area < 0:
            raise DataError("operation_area must be >= 0")
        if self.frames_present >= 1 and self.movement_in_place < 1.0 - 1e-9:
            raise DataError(
                f"movement_in_place {self.movement_in_place} below 1")
        if len(self.placement) != PLACEMENT_LEVELS:
            raise DataError("placement must have 3 levels")


@dataclass
class ExtractionResult:
    behaviours: list[ObjectBehaviour]
    unknown_behaviours: list[ObjectBehaviour] = field(default_factory=list)
    n_windows: int = 0


def window_slices(n_frames: int, window: int) -> list[tuple[int, int]]:
    """Non-overlapping [start, stop) blocks; trailing block kept iff it has
    at least ceil(window/2) frames."""
    if window < 1:
        raise DataError(f"window length {window} must be >= 1")
    out = []
    start = 0
    while start < n_frames:
        stop = min(start + window, n_frames)
        if stop - start >= math.ceil(window / 2):
            out.append((start, stop))
        start += window
    return out


def _dedupe_confident(frame: FrameObservation) -> dict[str, Detection]:
    """One detection per label: the highest-confidence confident one.

    Unknown-band detections participate under the ``unknown`` label but are
    excluded from frame-mean computations by the caller.
    """
    best: dict[str, Detection] = {}
    for d in frame.detections:
        band = band_detection(d)
        if band is ConfidenceBand.DISCARDED:
            continue
        label = UNKNOWN_LABEL if band is ConfidenceBand.UNKNOWN else d.label
        if label not in best or d.confidence > best[label].confidence:
            best[label] = d
    return best


def select_salient(frames: list[FrameObservation],
                   window: int) -> dict[str, list[list[bool]]]:
    """Per-frame salience passes of every label, per window.

    Returns label -> list over windows of per-frame booleans (True where
    the label's detection passed the >=-mean test in that frame). Labels
    absent from a frame get False there. Window survival is decided by
    the caller against the ceil(window/2) persistence threshold.
    """
    slices = window_slices(len(frames), window)
    per_frame = [_dedupe_confident(f) for f in frames]
    labels = sorted({lab for frame in per_frame for lab in frame})
    passes: dict[str, list[list[bool]]] = {
        lab: [[False] * (stop - start) for start, stop in slices]
        for lab in labels
    }
    for w, (start, stop) in enumerate(slices):
        for offset, idx in enumerate(range(start, stop)):
            dets = per_frame[idx]
            confident_mags = [d.flow_mag for lab, d in dets.items()
                              if lab != UNKNOWN_LABEL]
            if any(m is None for m in confident_mags):
                raise DataError(
                    f"frame {frames[idx].frame_index}: missing flow magnitude; "
                    "resolve flow before extraction")
            if not confident_mags:
                continue
            mean_mag = sum(confident_mags) / len(confident_mags)
            for lab, d in dets.items():
                if d.flow_mag is None:
                    raise DataError(
                        f"frame {frames[idx].frame_index}: missing flow "
                        f"magnitude for {lab!r}")
                if d.flow_mag >= mean_mag:
                    passes[lab][w][offset] = True
    return passes


def circular_mean_angle(mags: list[float], angs: list[float]) -> float:
    """Angle of the magnitude-weighted resultant, in [0, 360); 0 on
    cancellation."""
    vx = sum(m * math.cos(math.radians(a)) for m, a in zip(mags, angs))
    vy = sum(m * math.sin(math.radians(a)) for m, a in zip(mags, angs))
    if math.hypot(vx, vy) < 1e-12:
        return 0.0
    return math.degrees(math.atan2(vy, vx)) % 360.0


def placement_path(cx: float, cy: float) -> tuple[tuple[str, str], ...]:
    """3-level quadrant path of a point, y-down (top = small y)."""
    path = []
    x, y = cx, cy
    for _ in range(PLACEMENT_LEVELS):
        vert = "top" if y < 0.5 else "bottom"
        horiz = "left" if x < 0.5 else "right"
        path.append((vert, horiz))
        x = x * 2.0 - (0.0 if x < 0.5 else 1.0)
        y = y * 2.0 - (0.0 if y < 0.5 else 1.0)
    return tuple(path)


def aggregate_window(detections: list[Detection],
                     time_step: int) -> WindowAggregate:
    """Average one label's detections across a window into one aggregate."""
    if not detections:
        raise DataError("cannot aggregate an empty window")
    mags = [d.flow_mag for d in detections]
    angs = [d.flow_ang for d in detections]
    if any(v is None for v in mags) or any(v is None for v in angs):
        raise DataError("detection without flow statistics in aggregation")
    mean_mag = sum(mags) / len(mags)
    sector_angle = circular_mean_angle(mags, angs)
    xmin = min(d.bbox[0] for d in detections)
    ymin = min(d.bbox[1] for d in detections)
    xmax = max(d.bbox[2] for d in detections)
    ymax = max(d.bbox[3] for d in detections)
    operation_area = (xmax - xmin) * (ymax - ymin)
    mean_box_area = sum(d.bbox_area for d in detections) / len(detections)
    if mean_box_area <= 0:
        raise DataError("zero mean bounding-box area in window")
    mip = operation_area / mean_box_area
    center = (0.5 * (xmin + xmax), 0.5 * (ymin + ymax))
    return WindowAggregate(
        time_step=time_step,
        mean_mag=mean_mag,
        mean_ang_sector=sector_of(sector_angle),
        operation_area=operation_area,
        movement_in_place=mip,
        placement=placement_path(*center),
        frames_present=len(detections),
    )


def discretize(agg: WindowAggregate, scheme: BucketScheme) -> BehaviourStep:
    """Map a window aggregate onto bucket tokens; magnitude stays numeric
    (rounded to one decimal) and is bucketed only during rule induction."""
    return BehaviourStep(
        time_step=agg.time_step,
        magnitude=round(agg.mean_mag, 1),
        sector=agg.mean_ang_sector,
        area_bucket=scheme.area_bucket(agg.operation_area),
        mip_bucket=scheme.mip_bucket(agg.movement_in_place),
        placement=agg.placement,
    )


def extract_behaviours(frames: list[FrameObservation],
                       scheme: BucketScheme,
                       window: int,
                       clip_id: str) -> ExtractionResult:
    """Full extraction: salience filter, aggregation, discretization.

    Confident labels surviving at least one window yield one behaviour
    each, with their surviving windows renumbered 1..K. ``unknown``
    behaviours are kept in a side list instead of the reasoning output.
    """
    slices = window_slices(len(frames), window)
    passes = select_salient(frames, window)
    per_frame = [_dedupe_confident(f) for f in frames]
    threshold = math.ceil(window / 2)

    behaviours: list[ObjectBehaviour] = []
    unknowns: list[ObjectBehaviour] = []
    for label in sorted(passes):
        steps: list[BehaviourStep] = []
        for w, (start, stop) in enumerate(slices):
            if sum(passes[label][w]) < threshold:
                continue
            dets = [per_frame[i][label] for i in range(start, stop)
                    if label in per_frame[i]]
            agg = aggregate_window(dets, time_step=len(steps) + 1)
            steps.append(discretize(agg, scheme))
        if not steps:
            continue
        behaviour = ObjectBehaviour(object_label=label, clip_id=clip_id,
                                    steps=tuple(steps))
        if label == UNKNOWN_LABEL:
            unknowns.append(behaviour)
        else:
            behaviours.append(behaviour)
    return ExtractionResult(behaviours=behaviours,
                            unknown_behaviours=unknowns,
                            n_windows=len(slices))


@dataclass(frozen=True)
class CorpusStats:
    n_clips: int
    objects_per_clip: float
    steps_per_clip: float
    objects_per_step: float


def corpus_stats(results: list[ExtractionResult]) -> CorpusStats:
    """Averages over a corpus of extraction results (unknowns excluded)."""
    if not results:
        return CorpusStats(0, 0.0, 0.0, 0.0)
    n_clips = len(results)
    n_objects = sum(len(r.behaviours) for r in results)
    total_windows = sum(r.n_windows for r in results)
    incidences = sum(len(b.steps) for r in results for b in r.behaviours)
    return CorpusStats(
        n_clips=n_clips,
        objects_per_clip=n_objects / n_clips,
        steps_per_clip=total_windows / n_clips,
        objects_per_step=incidences / total_windows if total_windows else 0.0,
    )
