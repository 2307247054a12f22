"""Discretization scheme: named value buckets and direction sectors.

A BucketScheme carries three ordered bucket families (operation-area as a
fraction of the frame, movement-in-place ratio, and flow-magnitude bands
used only during rule induction) plus the fixed 8-sector compass ring.
Every real value maps to exactly one bucket; the last bucket of each
family is unbounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SchemeError

# Compass ring in clockwise screen order; also the vocabulary of angle facts.
SECTOR_RING: tuple[str, ...] = ("n", "ne", "e", "se", "s", "sw", "w", "nw")

# Sector lookup ring indexed by floor((angle+22.5)/45) with angles in
# mathematical convention (0 = screen-right, counterclockwise, y up).
_ANGLE_ORDER: tuple[str, ...] = ("e", "ne", "n", "nw", "w", "sw", "s", "se")

DEFAULT_AREA_BUCKETS: tuple[tuple[str, float], ...] = (
    ("very_small", 0.02),
    ("small", 0.05),
    ("medium", 0.15),
    ("large", 0.40),
    ("very_large", math.inf),
)

DEFAULT_MIP_BUCKETS: tuple[tuple[str, float], ...] = (
    ("small", 1.5),
    ("medium", 3.0),
    ("large", 6.0),
    ("very_large", math.inf),
)

_NUMERALS = ("zero", "five", "ten", "fifteen", "twenty", "twenty_five",
             "thirty", "thirty_five", "forty", "forty_five", "fifty")

DEFAULT_MAG_BUCKETS: tuple[tuple[str, float], ...] = tuple(
    (f"{_NUMERALS[i]}_to_{_NUMERALS[i + 1]}", 5.0 * (i + 1)) for i in range(10)
) + (("fifty_plus", math.inf),)


def _check_family(name: str, buckets: tuple[tuple[str, float], ...]) -> None:
    if not buckets:
        raise SchemeError(f"{name}: empty bucket family")
    names = [b for b, _ in buckets]
    if len(set(names)) != len(names):
        raise SchemeError(f"{name}: duplicate bucket names")
    bounds = [u for _, u in buckets]
    if any(b >= a for b, a in zip(bounds, bounds[1:])):
        raise SchemeError(f"{name}: upper bounds must be strictly increasing")
    if not math.isinf(bounds[-1]):
        raise SchemeError(f"{name}: final bucket must be unbounded")


def _bucket_of(value: float, buckets: tuple[tuple[str, float], ...]) -> str:
    for name, upper in buckets:
        if value < upper:
            return name
    return buckets[-1][0]


def sector_of(angle_deg: float) -> str:
    """Sector containing an angle (degrees, 0 = right, 90 = up).

    Sectors are 45 degrees wide and centered on the compass directions,
    half-open on the clockwise side: n covers [67.5, 112.5).
    """
    k = int(math.floor(((angle_deg + 22.5) % 360.0) / 45.0)) % 8
    return _ANGLE_ORDER[k]


@dataclass(frozen=True)
class BucketScheme:
    """Bucket boundaries for discretizing behaviour properties."""

    area_buckets: tuple[tuple[str, float], ...] = DEFAULT_AREA_BUCKETS
    mip_buckets: tuple[tuple[str, float], ...] = DEFAULT_MIP_BUCKETS
    mag_buckets: tuple[tuple[str, float], ...] = DEFAULT_MAG_BUCKETS
    sector_names: tuple[str, ...] = SECTOR_RING

    def __post_init__(self) -> None:
        _check_family("area_buckets", self.area_buckets)
        _check_family("mip_buckets", self.mip_buckets)
        _check_family("mag_buckets", self.mag_buckets)
        if tuple(self.sector_names) != SECTOR_RING:
            raise SchemeError("sector_names must be the 8 compass tokens "
                              f"{SECTOR_RING} in clockwise order")

    @property
    def area_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.area_buckets)

    @property
    def mip_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.mip_buckets)

    @property
    def mag_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.mag_buckets)

    def area_bucket(self, value: float) -> str:
        return _bucket_of(value, self.area_buckets)

    def mip_bucket(self, value: float) -> str:
        return _bucket_of(value, self.mip_buckets)

    def mag_bucket(self, value: float) -> str:
        return _bucket_of(value, self.mag_buckets)

    def sector_of(self, angle_deg: float) -> str:
        return sector_of(angle_deg)


DEFAULT_SCHEME = BucketScheme()


def _format_family(buckets: tuple[tuple[str, float], ...]) -> str:
    parts = []
    for name, upper in buckets:
        parts.append(name if math.isinf(upper) else f"{name}:{upper:g}")
    return ", ".join(parts)


def format_scheme(scheme: BucketScheme) -> str:
    """Render a scheme as the key/value config-file text."""
    return (
        f"area_buckets = {_format_family(scheme.area_buckets)}\n"
        f"mip_buckets = {_format_family(scheme.mip_buckets)}\n"
        f"mag_buckets = {_format_family(scheme.mag_buckets)}\n"
        f"sectors = {', '.join(scheme.sector_names)}\n"
    )


def _parse_family(key: str, text: str) -> tuple[tuple[str, float], ...]:
    out: list[tuple[str, float]] = []
    entries = [e.strip() for e in text.split(",") if e.strip()]
    for i, entry in enumerate(entries):
        if ":" in entry:
            name, bound = entry.split(":", 1)
            try:
                upper = float(bound)
            except ValueError as exc:
                raise SchemeError(f"{key}: bad bound in {entry!r}") from exc
        else:
            name, upper = entry, math.inf
            if i != len(entries) - 1:
                raise SchemeError(f"{key}: only the final bucket may omit its bound")
        out.append((name.strip(), upper))
    return tuple(out)


def parse_scheme(text: str) -> BucketScheme:
    """Parse the key/value config-file text produced by format_scheme."""
    values: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemeError(f"expected 'key = value', got {line!r}")
        key, val = line.split("=", 1)
        values[key.strip()] = val.strip()
    kwargs = {}
    for key, attr in (("area_buckets", "area_buckets"),
                      ("mip_buckets", "mip_buckets"),
                      ("mag_buckets", "mag_buckets")):
        if key in values:
            kwargs[attr] = _parse_family(key, values[key])
    if "sectors" in values:
        kwargs["sector_names"] = tuple(
            s.strip() for s in values["sectors"].split(",") if s.strip())
    return BucketScheme(**kwargs)


def load_scheme(path) -> BucketScheme:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scheme(fh.read())
