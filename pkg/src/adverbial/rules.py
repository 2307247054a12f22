"""Single-time-step indicator rules over behaviour facts.

Four rule families (biases): inclusive bucket ranges over magnitude and
operation-area, sector arcs over flow angle, and placement patterns over
the cell-occupancy hierarchy. A rule fires on a behaviour iff some
time-step satisfies its body. The canonical representation is the AST;
the ``a|b|bias|...`` line format round-trips through .rules files and the
``class(h, V0) :- ...`` text form is for humans and golden tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .behaviour import ObjectBehaviour
from .buckets import BucketScheme
from .errors import DataError


class Bias(Enum):
    MAGNITUDE = "magnitude"
    ANGLE = "angle"
    OPERATION_AREA = "operation_area"
    CELL_OCCUPANCY = "cell_occupancy"


BIAS_ORDER = (Bias.MAGNITUDE, Bias.ANGLE, Bias.OPERATION_AREA,
              Bias.CELL_OCCUPANCY)

FREE = "*"


@dataclass(frozen=True)
class IndicatorRule:
    """One batch-plausible rule; payload fields depend on the bias."""

    head_class: str
    bias: Bias
    lower: str | None = None   # range biases: inclusive bucket bounds
    upper: str | None = None
    anchor: str | None = None  # angle bias: anchor sector and tick reaches
    cw_reach: int = 0
    acw_reach: int = 0
    level: int | None = None   # cell bias: hierarchy level and constants
    vert: str | None = None    # None means the component is free
    horiz: str | None = None

    def __post_init__(self) -> None:
        if not self.head_class:
            raise DataError("rule head_class must be nonempty")
        if self.bias in (Bias.MAGNITUDE, Bias.OPERATION_AREA):
            if self.lower is None and self.upper is None:
                raise DataError("range rule needs a lower or upper bound")
        elif self.bias is Bias.ANGLE:
            if self.anchor is None:
                raise DataError("angle rule needs an anchor sector")
            if not (0 <= self.cw_reach <= 8 and 0 <= self.acw_reach <= 8):
                raise DataError("angle reaches must be in [0, 8]")
            if len(self.arc_offsets()) >= 8:
                raise DataError("angle arc must span less than the full circle")
        elif self.bias is Bias.CELL_OCCUPANCY:
            if self.level not in (0, 1, 2):
                raise DataError(f"cell rule level {self.level} not in 0..2")
            if self.vert is None and self.horiz is None:
                raise DataError("cell rule needs at least one constant component")

    def arc_offsets(self) -> set[int]:
        """Ring offsets from the anchor covered by the arc (0 = anchor)."""
        covered = {d % 8 for d in range(0, self.cw_reach + 1)}
        covered.update((-d) % 8 for d in range(0, self.acw_reach + 1))
        return covered

    def body_literal_count(self) -> int:
        if self.bias in (Bias.MAGNITUDE, Bias.OPERATION_AREA):
            return 1 + (self.lower is not None) + (self.upper is not None)
        if self.bias is Bias.ANGLE:
            return 1 + (self.cw_reach > 0) + (self.acw_reach > 0)
        return 1


def _family(scheme: BucketScheme, bias: Bias) -> tuple[str, ...]:
    return scheme.mag_names if bias is Bias.MAGNITUDE else scheme.area_names


def _range_indices(rule: IndicatorRule, scheme: BucketScheme) -> tuple[int, int]:
    names = _family(scheme, rule.bias)
    try:
        lo = 0 if rule.lower is None else names.index(rule.lower)
        hi = len(names) - 1 if rule.upper is None else names.index(rule.upper)
    except ValueError as exc:
        raise DataError(f"rule bound not in scheme buckets: {exc}")
    if lo > hi:
        raise DataError(f"empty range [{rule.lower}, {rule.upper}]")
    return lo, hi


def arc_sectors(rule: IndicatorRule, scheme: BucketScheme) -> list[str]:
    """Sectors covered by an angle rule, anticlockwise-most first."""
    ring = scheme.sector_names
    i = ring.index(rule.anchor)
    out = [ring[(i - d) % 8] for d in range(rule.acw_reach, 0, -1)]
    out.append(rule.anchor)
    out.extend(ring[(i + d) % 8] for d in range(1, rule.cw_reach + 1))
    seen: set[str] = set()
    unique = [s for s in out if not (s in seen or seen.add(s))]
    return unique


def rule_fires(rule: IndicatorRule, b: ObjectBehaviour,
               scheme: BucketScheme) -> bool:
    """True iff some time-step of the behaviour satisfies the rule body."""
    if rule.bias is Bias.MAGNITUDE:
        names = scheme.mag_names
        lo, hi = _range_indices(rule, scheme)
        for s in b.steps:
            idx = names.index(scheme.mag_bucket(round(s.magnitude, 1)))
            if lo <= idx <= hi:
                return True
        return False
    if rule.bias is Bias.OPERATION_AREA:
        names = scheme.area_names
        lo, hi = _range_indices(rule, scheme)
        for s in b.steps:
            if s.area_bucket not in names:
                raise DataError(f"area bucket {s.area_bucket!r} not in scheme")
            idx = names.index(s.area_bucket)
            if lo <= idx <= hi:
                return True
        return False
    if rule.bias is Bias.ANGLE:
        covered = set(arc_sectors(rule, scheme))
        for s in b.steps:
            if s.sector not in scheme.sector_names:
                raise DataError(f"sector {s.sector!r} not in scheme")
            if s.sector in covered:
                return True
        return False
    # cell occupancy
    for s in b.steps:
        vert, horiz = s.placement[rule.level]
        if rule.vert is not None and vert != rule.vert:
            continue
        if rule.horiz is not None and horiz != rule.horiz:
            continue
        return True
    return False


def _opt(token: str | None) -> str:
    return FREE if token is None else token


def _unopt(token: str) -> str | None:
    return None if token == FREE else token


def rule_payload(rule: IndicatorRule) -> str:
    """Canonical payload text (used for serialization and tie-breaking)."""
    head = f"head={rule.head_class}"
    if rule.bias in (Bias.MAGNITUDE, Bias.OPERATION_AREA):
        return f"{head}|lower={_opt(rule.lower)}|upper={_opt(rule.upper)}"
    if rule.bias is Bias.ANGLE:
        return f"{head}|anchor={rule.anchor}|cw={rule.cw_reach}|acw={rule.acw_reach}"
    return f"{head}|level={rule.level}|vert={_opt(rule.vert)}|horiz={_opt(rule.horiz)}"


def format_rule_line(pair: tuple[str, str], rule: IndicatorRule) -> str:
    return f"{pair[0]}|{pair[1]}|{rule.bias.value}|{rule_payload(rule)}"


def parse_rule_line(line: str, line_no: int = 0) -> tuple[tuple[str, str], IndicatorRule]:
    parts = line.strip().split("|")
    if len(parts) < 4:
        raise DataError(f"line {line_no}: bad rule line {line!r}")
    adverb, antonym, bias_token = parts[0], parts[1], parts[2]
    try:
        bias = Bias(bias_token)
    except ValueError:
        raise DataError(f"line {line_no}: unknown bias {bias_token!r}")
    fields: dict[str, str] = {}
    for part in parts[3:]:
        if "=" not in part:
            raise DataError(f"line {line_no}: bad field {part!r}")
        key, val = part.split("=", 1)
        fields[key] = val
    try:
        if bias in (Bias.MAGNITUDE, Bias.OPERATION_AREA):
            rule = IndicatorRule(head_class=fields["head"], bias=bias,
                                 lower=_unopt(fields["lower"]),
                                 upper=_unopt(fields["upper"]))
        elif bias is Bias.ANGLE:
            rule = IndicatorRule(head_class=fields["head"], bias=bias,
                                 anchor=fields["anchor"],
                                 cw_reach=int(fields["cw"]),
                                 acw_reach=int(fields["acw"]))
        else:
            rule = IndicatorRule(head_class=fields["head"], bias=bias,
                                 level=int(fields["level"]),
                                 vert=_unopt(fields["vert"]),
                                 horiz=_unopt(fields["horiz"]))
    except (KeyError, ValueError) as exc:
        raise DataError(f"line {line_no}: incomplete rule line ({exc})")
    return (adverb, antonym), rule


def rule_to_text(rule: IndicatorRule, scheme: BucketScheme) -> str:
    """Human-readable rule text in the class(h, V0) :- body style."""
    head = f"class({rule.head_class}, V0)"
    if rule.bias in (Bias.MAGNITUDE, Bias.OPERATION_AREA):
        atom = ("magnitude(V0, M0, T0)" if rule.bias is Bias.MAGNITUDE
                else "operation_area(V0, B0, T0)")
        var = "M0" if rule.bias is Bias.MAGNITUDE else "B0"
        body = [atom]
        if rule.lower is not None:
            body.append(f"bucket_geq({var}, {rule.lower})")
        if rule.upper is not None:
            body.append(f"bucket_leq({var}, {rule.upper})")
        return f"{head} :- {', '.join(body)}."
    if rule.bias is Bias.ANGLE:
        sectors = ", ".join(arc_sectors(rule, scheme))
        return f"{head} :- angle(V0, A0, T0), sector_in(A0, [{sectors}])."
    vert = "V1" if rule.vert is None else rule.vert
    horiz = "H1" if rule.horiz is None else rule.horiz
    return f"{head} :- place(V0, {rule.level}, {vert}, {horiz}, T0)."


def write_rules(path, pair: tuple[str, str], rules: list[IndicatorRule]) -> str:
    text = "".join(format_rule_line(pair, r) + "\n" for r in rules)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def read_rules(path) -> list[tuple[tuple[str, str], IndicatorRule]]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            out.append(parse_rule_line(line, line_no))
    return out
