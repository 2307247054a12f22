"""Object-behaviour facts, indicator rules and adverb-vs-antonym classification."""

from .behaviour import BehaviourStep, ObjectBehaviour
from .buckets import BucketScheme, DEFAULT_SCHEME
from .observations import Detection, FrameObservation, FlowRaster

__version__ = "0.1.0"

__all__ = [
    "BehaviourStep",
    "ObjectBehaviour",
    "BucketScheme",
    "DEFAULT_SCHEME",
    "Detection",
    "FrameObservation",
    "FlowRaster",
    "__version__",
]
