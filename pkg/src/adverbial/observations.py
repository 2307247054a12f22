"""Loading and validation of per-frame detection/flow observations.

Observation files are UTF-8 JSONL, one frame per line:

    {"frame": 0, "detections": [{"label": "person", "confidence": 0.9,
     "bbox": [0.1, 0.1, 0.3, 0.4], "flow_mag": 7.2, "flow_ang": 90.0}]}

Per-box flow statistics may be omitted, in which case they are resolved
from a dense flow-raster sidecar (binary, magic AFLW). Confidence banding
discards detections below 0.3 and relabels those in [0.3, 0.5) as
``unknown``; 0.5 and above count as confident. Angles are degrees in
[0, 360) with 0 = screen-right and 90 = screen-up.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import ObservationError

UNKNOWN_LABEL = "unknown"

CONFIDENCE_DISCARD_BELOW = 0.3
CONFIDENCE_CONFIDENT_FROM = 0.5

FLOW_MAGIC = b"AFLW"


class ConfidenceBand(Enum):
    DISCARDED = "discarded"
    UNKNOWN = "unknown"
    CONFIDENT = "confident"


@dataclass(frozen=True)
class Detection:
    """One detected object patch with optional averaged flow statistics."""

    label: str
    confidence: float
    bbox: tuple[float, float, float, float]
    flow_mag: float | None = None
    flow_ang: float | None = None

    def __post_init__(self) -> None:
        if not self.label:
            raise ObservationError("detection label must be nonempty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ObservationError(
                f"confidence {self.confidence} outside [0, 1]")
        xmin, ymin, xmax, ymax = self.bbox
        if not (xmin < xmax and ymin < ymax):
            raise ObservationError(f"degenerate bbox {self.bbox}")
        if self.flow_mag is not None and self.flow_mag < 0:
            raise ObservationError(f"negative flow_mag {self.flow_mag}")
        if self.flow_ang is not None and not 0.0 <= self.flow_ang < 360.0:
            raise ObservationError(
                f"flow_ang {self.flow_ang} outside [0, 360)")

    @property
    def bbox_area(self) -> float:
        xmin, ymin, xmax, ymax = self.bbox
        return (xmax - xmin) * (ymax - ymin)

    @property
    def bbox_center(self) -> tuple[float, float]:
        xmin, ymin, xmax, ymax = self.bbox
        return (0.5 * (xmin + xmax), 0.5 * (ymin + ymax))


@dataclass(frozen=True)
class FrameObservation:
    """Detections of one delayed-capture frame (every fifth source frame)."""

    frame_index: int
    detections: tuple[Detection, ...]

    def __post_init__(self) -> None:
        if self.frame_index < 0:
            raise ObservationError(f"negative frame index {self.frame_index}")


def band_detection(d: Detection) -> ConfidenceBand:
    """Confidence band of a detection; total over [0, 1]."""
    if d.confidence < CONFIDENCE_DISCARD_BELOW:
        return ConfidenceBand.DISCARDED
    if d.confidence < CONFIDENCE_CONFIDENT_FROM:
        return ConfidenceBand.UNKNOWN
    return ConfidenceBand.CONFIDENT


def apply_banding(frames: list[FrameObservation]) -> list[FrameObservation]:
    """Drop discarded detections and relabel low-confidence ones ``unknown``."""
    out = []
    for frame in frames:
        kept = []
        for d in frame.detections:
            band = band_detection(d)
            if band is ConfidenceBand.DISCARDED:
                continue
            if band is ConfidenceBand.UNKNOWN:
                d = replace(d, label=UNKNOWN_LABEL)
            kept.append(d)
        out.append(FrameObservation(frame.frame_index, tuple(kept)))
    return out


def _detection_from_json(obj: dict, line_no: int) -> Detection:
    try:
        label = obj["label"]
        confidence = obj["confidence"]
        bbox = obj["bbox"]
    except (KeyError, TypeError) as exc:
        raise ObservationError(f"line {line_no}: missing detection field {exc}")
    if not isinstance(bbox, list) or len(bbox) != 4:
        raise ObservationError(f"line {line_no}: bbox must be a 4-element list")
    try:
        return Detection(
            label=str(label),
            confidence=float(confidence),
            bbox=tuple(float(v) for v in bbox),
            flow_mag=None if obj.get("flow_mag") is None else float(obj["flow_mag"]),
            flow_ang=None if obj.get("flow_ang") is None else float(obj["flow_ang"]),
        )
    except ObservationError as exc:
        raise ObservationError(f"line {line_no}: {exc}") from exc


def load_observations(path) -> list[FrameObservation]:
    """Load a JSONL observation file, validating order and invariants."""
    frames: list[FrameObservation] = []
    last_index = -1
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ObservationError(f"line {line_no}: bad JSON ({exc.msg})")
            if not isinstance(obj, dict) or "frame" not in obj:
                raise ObservationError(f"line {line_no}: missing 'frame' field")
            frame_index = obj["frame"]
            if not isinstance(frame_index, int):
                raise ObservationError(f"line {line_no}: frame index must be an integer")
            if frame_index <= last_index:
                raise ObservationError(
                    f"line {line_no}: frame index {frame_index} not strictly "
                    f"increasing (previous {last_index})")
            last_index = frame_index
            dets = tuple(_detection_from_json(d, line_no)
                         for d in obj.get("detections", []))
            try:
                frames.append(FrameObservation(frame_index, dets))
            except ObservationError as exc:
                raise ObservationError(f"line {line_no}: {exc}") from exc
    return frames


def _detection_to_json(d: Detection) -> dict:
    obj: dict = {
        "label": d.label,
        "confidence": d.confidence,
        "bbox": list(d.bbox),
    }
    if d.flow_mag is not None:
        obj["flow_mag"] = d.flow_mag
    if d.flow_ang is not None:
        obj["flow_ang"] = d.flow_ang
    return obj


def dump_observations(frames: list[FrameObservation]) -> str:
    """Canonical JSONL text for a frame list; stable under reload."""
    lines = []
    for frame in frames:
        lines.append(json.dumps({
            "frame": frame.frame_index,
            "detections": [_detection_to_json(d) for d in frame.detections],
        }, separators=(", ", ": ")))
    return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class FlowRaster:
    """Dense per-frame optical-flow grids (magnitude and angle in degrees)."""

    width: int
    height: int
    magnitudes: np.ndarray  # shape (frames, height, width)
    angles: np.ndarray      # shape (frames, height, width)

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ObservationError("raster dimensions must be positive")
        expect = (self.magnitudes.shape[0], self.height, self.width)
        if self.magnitudes.shape != expect or self.angles.shape != expect:
            raise ObservationError(
                f"raster arrays must have shape {expect}, got "
                f"{self.magnitudes.shape} and {self.angles.shape}")

    @property
    def n_frames(self) -> int:
        return int(self.magnitudes.shape[0])


def write_flow_raster(path, raster: FlowRaster) -> None:
    """Write the binary sidecar: AFLW magic, u32 dims, f32 (mag, ang) pairs."""
    with open(path, "wb") as fh:
        fh.write(FLOW_MAGIC)
        fh.write(struct.pack("<III", raster.width, raster.height, raster.n_frames))
        pairs = np.stack([raster.magnitudes, raster.angles], axis=-1)
        fh.write(pairs.astype("<f4").tobytes())


def load_flow_raster(path) -> FlowRaster:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != FLOW_MAGIC:
            raise ObservationError(f"bad flow raster magic {magic!r}")
        header = fh.read(12)
        if len(header) != 12:
            raise ObservationError("truncated flow raster header")
        width, height, n_frames = struct.unpack("<III", header)
        count = n_frames * height * width * 2
        data = np.frombuffer(fh.read(), dtype="<f4")
        if data.size != count:
            raise ObservationError(
                f"flow raster payload has {data.size} floats, expected {count}")
    pairs = data.reshape(n_frames, height, width, 2)
    return FlowRaster(width=width, height=height,
                      magnitudes=np.ascontiguousarray(pairs[..., 0], dtype=np.float64),
                      angles=np.ascontiguousarray(pairs[..., 1], dtype=np.float64))


class BoxFlow(NamedTuple):
    mag: float
    ang: float
    zero_resultant: bool


def average_flow_in_bbox(raster: FlowRaster, frame: int,
                         bbox: tuple[float, float, float, float]) -> BoxFlow:
    """Average the flow cells whose centers fall inside a normalized bbox.

    Magnitude is the arithmetic mean; the angle is the direction of the
    magnitude-weighted resultant vector. A cancelled resultant reports
    angle 0 with the zero_resultant flag set.
    """
    if not 0 <= frame < raster.n_frames:
        raise ObservationError(f"frame {frame} outside raster range")
    xmin, ymin, xmax, ymax = bbox
    cx = (np.arange(raster.width) + 0.5) / raster.width
    cy = (np.arange(raster.height) + 0.5) / raster.height
    in_x = (cx >= xmin) & (cx <= xmax)
    in_y = (cy >= ymin) & (cy <= ymax)
    if not in_x.any() or not in_y.any():
        raise ObservationError(f"bbox {bbox} covers no raster cell centers")
    mags = raster.magnitudes[frame][np.ix_(in_y, in_x)]
    angs = np.deg2rad(raster.angles[frame][np.ix_(in_y, in_x)])
    mean_mag = float(mags.mean())
    vx = float((mags * np.cos(angs)).sum())
    vy = float((mags * np.sin(angs)).sum())
    resultant = math.hypot(vx, vy)
    if resultant < 1e-12:
        return BoxFlow(mean_mag, 0.0, True)
    ang = math.degrees(math.atan2(vy, vx)) % 360.0
    return BoxFlow(mean_mag, ang, False)


def resolve_flow(frames: list[FrameObservation],
                 raster: FlowRaster | None) -> list[FrameObservation]:
    """Fill in missing per-box flow statistics from the raster sidecar.

    Inline statistics win when present. Raster frames are indexed by
    position in the frame list.
    """
    out = []
    for pos, frame in enumerate(frames):
        dets = []
        for d in frame.detections:
            if d.flow_mag is None or d.flow_ang is None:
                if raster is None:
                    raise ObservationError(
                        f"frame {frame.frame_index}: detection {d.label!r} has no "
                        "flow statistics and no raster sidecar was provided")
                if pos >= raster.n_frames:
                    raise ObservationError(
                        f"raster has {raster.n_frames} frames, observation file "
                        f"has more")
                flow = average_flow_in_bbox(raster, pos, d.bbox)
                d = replace(d,
                            flow_mag=flow.mag if d.flow_mag is None else d.flow_mag,
                            flow_ang=flow.ang if d.flow_ang is None else d.flow_ang)
            dets.append(d)
        out.append(FrameObservation(frame.frame_index, tuple(dets)))
    return out
