"""Flat text form of behaviours and the masked-corpus exports.

Each time-step flattens to a fixed 19-word segment

    <label> magnitude <m> angle <sector> operation area <bucket>
    movement in place <bucket> place <v0> <h0> <v1> <h1> <v2> <h2>

with no time-stamps or punctuation beyond the decimal point of the
magnitude; steps are concatenated chronologically and the line truncated
at 512 words. Word roles follow the fixed 19-word cycle, so they can be
rebuilt from a corpus file. Masking replaces value-words with ``[MASK]``
at the given rate; prompt-words and the object-word are never masked.
Each sample masks under its own RNG (derived from the global seed and
the clip#object key) so processing order cannot change output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .behaviour import ObjectBehaviour
from .errors import DataError
from .features import EmbeddingTable, load_embeddings
from .seeding import derive_seed

MAX_WORDS = 512
MASK_TOKEN = "[MASK]"
DEFAULT_MASK_RATE = 0.2


class Role(Enum):
    OBJECT = "object"
    PROMPT = "prompt"
    VALUE = "value"


# Roles of the 19 words of one flattened step, in order.
STEP_ROLE_CYCLE: tuple[Role, ...] = (
    Role.OBJECT,                       # label
    Role.PROMPT, Role.VALUE,           # magnitude <m>
    Role.PROMPT, Role.VALUE,           # angle <sector>
    Role.PROMPT, Role.PROMPT, Role.VALUE,              # operation area <b>
    Role.PROMPT, Role.PROMPT, Role.PROMPT, Role.VALUE,  # movement in place <b>
    Role.PROMPT,                       # place
    Role.VALUE, Role.VALUE, Role.VALUE, Role.VALUE, Role.VALUE, Role.VALUE,
)

STEP_WORDS = len(STEP_ROLE_CYCLE)


@dataclass(frozen=True)
class FlatBehaviour:
    clip_id: str
    object_label: str
    tokens: tuple[str, ...]
    roles: tuple[Role, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.roles):
            raise DataError("tokens and roles must be parallel")
        if len(self.tokens) > MAX_WORDS:
            raise DataError(f"flat line exceeds {MAX_WORDS} words")

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    @property
    def key(self) -> str:
        return f"{self.clip_id}#{self.object_label}"


def flatten(b: ObjectBehaviour) -> FlatBehaviour:
    """Flatten a behaviour to one role-tagged line of at most 512 words."""
    tokens: list[str] = []
    for s in b.steps:
        tokens.append(b.object_label)
        tokens.extend(("magnitude", f"{s.magnitude:.1f}"))
        tokens.extend(("angle", s.sector))
        tokens.extend(("operation", "area", s.area_bucket))
        tokens.extend(("movement", "in", "place", s.mip_bucket))
        tokens.append("place")
        for vert, horiz in s.placement:
            tokens.extend((vert, horiz))
    tokens = tokens[:MAX_WORDS]
    roles = tuple(STEP_ROLE_CYCLE[i % STEP_WORDS] for i in range(len(tokens)))
    return FlatBehaviour(clip_id=b.clip_id, object_label=b.object_label,
                         tokens=tuple(tokens), roles=roles)


def roles_for_tokens(tokens: tuple[str, ...]) -> tuple[Role, ...]:
    """Rebuild roles positionally from the fixed step cycle."""
    return tuple(STEP_ROLE_CYCLE[i % STEP_WORDS] for i in range(len(tokens)))


@dataclass(frozen=True)
class MaskedSample:
    clip_id: str
    object_label: str
    tokens: tuple[str, ...]
    targets: tuple[tuple[int, str], ...]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    @property
    def key(self) -> str:
        return f"{self.clip_id}#{self.object_label}"

    def unmasked(self) -> tuple[str, ...]:
        tokens = list(self.tokens)
        for pos, word in self.targets:
            tokens[pos] = word
        return tuple(tokens)


def mask_values(f: FlatBehaviour, rate: float = DEFAULT_MASK_RATE,
                seed: int = 0) -> MaskedSample:
    """Mask each value-word independently with the given probability."""
    if not 0.0 <= rate <= 1.0:
        raise DataError(f"mask rate {rate} outside [0, 1]")
    rng = random.Random(derive_seed(seed, "mask", f.key))
    tokens = list(f.tokens)
    targets: list[tuple[int, str]] = []
    for i, (token, role) in enumerate(zip(f.tokens, f.roles)):
        if role is not Role.VALUE:
            continue
        if rng.random() < rate:
            tokens[i] = MASK_TOKEN
            targets.append((i, token))
    return MaskedSample(clip_id=f.clip_id, object_label=f.object_label,
                        tokens=tuple(tokens), targets=tuple(targets))


def _split_key(key: str, line_no: int) -> tuple[str, str]:
    if "#" not in key:
        raise DataError(f"line {line_no}: corpus key {key!r} lacks '#'")
    clip_id, object_label = key.split("#", 1)
    return clip_id, object_label


def write_corpus(path, flats: list[FlatBehaviour]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for f in flats:
            fh.write(f"{f.key}\t{f.text}\n")


def read_corpus(path) -> list[FlatBehaviour]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"line {line_no}: corpus line needs exactly "
                                "one tab")
            clip_id, object_label = _split_key(parts[0], line_no)
            tokens = tuple(parts[1].split())
            out.append(FlatBehaviour(clip_id=clip_id,
                                     object_label=object_label,
                                     tokens=tokens,
                                     roles=roles_for_tokens(tokens)))
    return out


def write_masked_corpus(path, samples: list[MaskedSample]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            targets = " ".join(f"{pos}:{word}" for pos, word in s.targets)
            fh.write(f"{s.key}\t{s.text}\t{targets}\n")


def read_masked_corpus(path) -> list[MaskedSample]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataError(f"line {line_no}: masked line needs two tabs")
            clip_id, object_label = _split_key(parts[0], line_no)
            targets = []
            for item in parts[2].split():
                pos, word = item.split(":", 1)
                targets.append((int(pos), word))
            out.append(MaskedSample(clip_id=clip_id,
                                    object_label=object_label,
                                    tokens=tuple(parts[1].split()),
                                    targets=tuple(targets)))
    return out


def import_summary_vectors(path) -> EmbeddingTable:
    """Summary vectors keyed by clip#object, in the word-vector format."""
    table = load_embeddings(path)
    for key in table.entries:
        if "#" not in key:
            raise DataError(f"summary key {key!r} lacks the clip#object form")
    return table
