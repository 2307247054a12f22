"""Fact language for object behaviours: model, emit, parse, background.

Programs are plain text, one fact per line terminated by ``.``, with
``%`` comments. The header comments carry clip id, action token and
adverb/antonym label tags so a program file is self-contained:

    % clip: vid42
    % action: run
    % labels: upwards/downwards
    % background
    opposite(left, right).
    less_than(very_small, small, 1).
    ...
    % behaviours
    detected(person, 1).
    magnitude(person, 18.3, 1).
    angle(person, n, 1).
    operation_area(person, small, 1).
    movement_in_place(person, medium, 1).
    place(person, 0, top, left, 1).
    ...

In ``% labels: a/b`` the first token is the clip's adverb label and the
second its antonym. Unknown predicates are parsed and kept in an extras
list rather than dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .behaviour import PLACEMENT_LEVELS, BehaviourStep, ObjectBehaviour
from .buckets import BucketScheme
from .errors import AspParseError, DataError

Arg = str | int | float

BEHAVIOUR_ARITIES = {
    "detected": 2,
    "magnitude": 3,
    "angle": 3,
    "operation_area": 3,
    "movement_in_place": 3,
    "place": 5,
}

BACKGROUND_ARITIES = {
    "opposite": 2,
    "less_than": 3,
    "clockwise": 3,
    "anticlockwise": 3,
}

ARITIES = {**BEHAVIOUR_ARITIES, **BACKGROUND_ARITIES}


@dataclass(frozen=True)
class Fact:
    predicate: str
    args: tuple[Arg, ...]

    def __str__(self) -> str:
        return f"{self.predicate}({', '.join(format_arg(a) for a in self.args)})."


def format_arg(arg: Arg) -> str:
    if isinstance(arg, float):
        return f"{arg:.1f}"
    return str(arg)


@dataclass
class AspProgram:
    """Behaviour facts plus background knowledge for one clip."""

    clip_id: str
    facts: list[Fact] = field(default_factory=list)
    background: list[Fact] = field(default_factory=list)
    adverb_labels: list[tuple[str, str]] = field(default_factory=list)
    action: str | None = None
    extras: list[Fact] = field(default_factory=list)

    def validate(self) -> None:
        """Check the detected/2 anchor invariant and background purity."""
        detected = {(f.args[0], f.args[1]) for f in self.facts
                    if f.predicate == "detected"}
        for f in self.facts:
            if f.predicate == "detected":
                continue
            if f.predicate not in BEHAVIOUR_ARITIES:
                raise DataError(f"background predicate {f.predicate} among "
                                "behaviour facts")
            obj, t = f.args[0], f.args[-1]
            if (obj, t) not in detected:
                raise DataError(
                    f"fact {f} has no matching detected({obj}, {t})")
        for f in self.background:
            if f.predicate in BEHAVIOUR_ARITIES:
                raise DataError(f"behaviour predicate {f.predicate} in background")


def generate_background(scheme: BucketScheme) -> list[Fact]:
    """Ground background facts: opposites, bucket orderings, sector ring.

    less_than is materialized with step distances for every ordered bucket
    family; clockwise/anticlockwise cover all sector pairs with distances
    1..8 (the closure is capped at 8 ticks, so d=8 closes the ring).
    """
    facts: list[Fact] = [
        Fact("opposite", ("left", "right")),
        Fact("opposite", ("right", "left")),
        Fact("opposite", ("top", "bottom")),
        Fact("opposite", ("bottom", "top")),
    ]
    seen: dict[tuple[str, str], int] = {}
    for family in (scheme.area_buckets, scheme.mip_buckets, scheme.mag_buckets):
        names = [n for n, _ in family]
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                pair = (names[i], names[j])
                dist = j - i
                if pair in seen:
                    if seen[pair] != dist:
                        raise DataError(
                            f"inconsistent bucket orderings: less_than{pair} "
                            f"distance {seen[pair]} vs {dist}")
                    continue
                seen[pair] = dist
                facts.append(Fact("less_than", (pair[0], pair[1], dist)))
    ring = scheme.sector_names
    for i, start in enumerate(ring):
        for d in range(1, 9):
            facts.append(Fact("clockwise", (start, ring[(i + d) % 8], d)))
    for i, start in enumerate(ring):
        for d in range(1, 9):
            facts.append(Fact("anticlockwise", (start, ring[(i - d) % 8], d)))
    return facts


def behaviour_facts(b: ObjectBehaviour) -> list[Fact]:
    """Facts of one behaviour, grouped per time-step."""
    facts: list[Fact] = []
    for s in b.steps:
        t = s.time_step
        facts.append(Fact("detected", (b.object_label, t)))
        facts.append(Fact("magnitude", (b.object_label, round(s.magnitude, 1), t)))
        facts.append(Fact("angle", (b.object_label, s.sector, t)))
        facts.append(Fact("operation_area", (b.object_label, s.area_bucket, t)))
        facts.append(Fact("movement_in_place", (b.object_label, s.mip_bucket, t)))
        for level, (vert, horiz) in enumerate(s.placement):
            facts.append(Fact("place", (b.object_label, level, vert, horiz, t)))
    return facts


def program_from_behaviours(clip_id: str,
                            behaviours: list[ObjectBehaviour],
                            background: list[Fact],
                            adverb_labels: list[tuple[str, str]] | None = None,
                            action: str | None = None) -> AspProgram:
    facts: list[Fact] = []
    for b in behaviours:
        if b.clip_id != clip_id:
            raise DataError(f"behaviour {b.key} does not belong to clip {clip_id}")
        facts.extend(behaviour_facts(b))
    program = AspProgram(clip_id=clip_id, facts=facts,
                         background=list(background),
                         adverb_labels=list(adverb_labels or []),
                         action=action)
    program.validate()
    return program


def render_program(program: AspProgram) -> str:
    """Deterministic text form; parse_program inverts it structurally."""
    lines = [f"% clip: {program.clip_id}"]
    if program.action is not None:
        lines.append(f"% action: {program.action}")
    if program.adverb_labels:
        tags = " ".join(f"{a}/{b}" for a, b in program.adverb_labels)
        lines.append(f"% labels: {tags}")
    lines.append("% background")
    lines.extend(str(f) for f in program.background)
    lines.append("% behaviours")
    lines.extend(str(f) for f in program.facts)
    lines.extend(str(f) for f in program.extras)
    return "".join(line + "\n" for line in lines)


_FACT_RE = re.compile(r"^([a-z][a-z0-9_-]*)\((.*)\)\s*\.$")
_INT_RE = re.compile(r"^-?\d+$")
_FLOAT_RE = re.compile(r"^-?\d+\.\d+$")
_TOKEN_RE = re.compile(r"^[a-z][a-z0-9_]*$")


def _parse_arg(text: str, line_no: int) -> Arg:
    if _INT_RE.match(text):
        return int(text)
    if _FLOAT_RE.match(text):
        return float(text)
    token = text.replace("-", "_")
    if not _TOKEN_RE.match(token):
        raise AspParseError(f"bad argument {text!r}", line_no)
    return token


# Argument positions that must be numeric, per known predicate.
_NUMERIC_POSITIONS = {
    "detected": (1,),
    "magnitude": (1, 2),
    "angle": (2,),
    "operation_area": (2,),
    "movement_in_place": (2,),
    "place": (1, 4),
    "less_than": (2,),
    "clockwise": (2,),
    "anticlockwise": (2,),
}


def parse_fact(line: str, line_no: int) -> Fact:
    m = _FACT_RE.match(line)
    if not m:
        if line.endswith("."):
            raise AspParseError(f"malformed fact {line!r}", line_no)
        raise AspParseError(f"unterminated fact {line!r}", line_no)
    predicate = m.group(1).replace("-", "_")
    body = m.group(2).strip()
    args = tuple(_parse_arg(a.strip(), line_no)
                 for a in body.split(",")) if body else ()
    if predicate in ARITIES and len(args) != ARITIES[predicate]:
        raise AspParseError(
            f"{predicate} expects {ARITIES[predicate]} arguments, "
            f"got {len(args)}", line_no)
    for pos in _NUMERIC_POSITIONS.get(predicate, ()):
        if not isinstance(args[pos], (int, float)):
            raise AspParseError(
                f"{predicate} argument {pos + 1} must be numeric, "
                f"got {args[pos]!r}", line_no)
    return Fact(predicate, args)


def parse_program(text: str) -> AspProgram:
    """Parse program text; tolerant of comments and unknown predicates."""
    program = AspProgram(clip_id="")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%"):
            comment = line[1:].strip()
            if comment.startswith("clip:"):
                program.clip_id = comment[len("clip:"):].strip()
            elif comment.startswith("action:"):
                program.action = comment[len("action:"):].strip()
            elif comment.startswith("labels:"):
                for tag in comment[len("labels:"):].split():
                    if "/" not in tag:
                        raise AspParseError(f"bad label tag {tag!r}", line_no)
                    adverb, antonym = tag.split("/", 1)
                    program.adverb_labels.append((adverb, antonym))
            continue
        fact = parse_fact(line, line_no)
        if fact.predicate in BEHAVIOUR_ARITIES:
            program.facts.append(fact)
        elif fact.predicate in BACKGROUND_ARITIES:
            program.background.append(fact)
        else:
            program.extras.append(fact)
    return program


def load_program(path) -> AspProgram:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_program(fh.read())


def behaviours_from_program(program: AspProgram) -> list[ObjectBehaviour]:
    """Rebuild behaviour objects from a program's facts.

    Objects appear in order of their first detected/2 fact; every time-step
    must carry the full property set (magnitude, angle, operation_area,
    movement_in_place and all placement levels).
    """
    by_object: dict[str, dict[int, dict]] = {}
    order: list[str] = []
    for f in program.facts:
        if f.predicate == "detected":
            obj, t = f.args
            if obj not in by_object:
                by_object[obj] = {}
                order.append(obj)
            by_object[obj].setdefault(t, {"placement": {}})
    for f in program.facts:
        if f.predicate == "detected":
            continue
        obj, t = f.args[0], f.args[-1]
        step = by_object[obj][t]
        if f.predicate == "magnitude":
            step["magnitude"] = float(f.args[1])
        elif f.predicate == "angle":
            step["sector"] = f.args[1]
        elif f.predicate == "operation_area":
            step["area_bucket"] = f.args[1]
        elif f.predicate == "movement_in_place":
            step["mip_bucket"] = f.args[1]
        elif f.predicate == "place":
            level, vert, horiz = f.args[1], f.args[2], f.args[3]
            step["placement"][level] = (vert, horiz)
    behaviours = []
    for obj in order:
        steps = []
        for t in sorted(by_object[obj]):
            raw = by_object[obj][t]
            missing = [k for k in ("magnitude", "sector", "area_bucket",
                                   "mip_bucket") if k not in raw]
            if missing or sorted(raw["placement"]) != list(range(PLACEMENT_LEVELS)):
                raise DataError(
                    f"clip {program.clip_id}: object {obj} step {t} is missing "
                    f"facts ({', '.join(missing) or 'placement levels'})")
            steps.append(BehaviourStep(
                time_step=t,
                magnitude=raw["magnitude"],
                sector=raw["sector"],
                area_bucket=raw["area_bucket"],
                mip_bucket=raw["mip_bucket"],
                placement=tuple(raw["placement"][lv]
                                for lv in range(PLACEMENT_LEVELS)),
            ))
        behaviours.append(ObjectBehaviour(object_label=obj,
                                          clip_id=program.clip_id,
                                          steps=tuple(steps)))
    return behaviours
