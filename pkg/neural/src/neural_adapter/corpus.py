"""Readers for the flat and masked behaviour-corpus files.

Flat corpus lines are ``clip#object<TAB>space-separated words``; masked
lines add a third tab field of ``position:original`` targets, with the
literal ``[MASK]`` standing in each masked slot. Word roles follow the
fixed 19-word step cycle of the flat template (object word, prompt words
such as ``magnitude``, and the value words carrying the behaviour), which
lets a consumer count value words without extra metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

MASK_LITERAL = "[MASK]"
STEP_WORDS = 19
# indices of the value words within one 19-word step segment
VALUE_OFFSETS = frozenset({2, 4, 7, 11, 13, 14, 15, 16, 17, 18})
OBJECT_OFFSET = 0

MASK_FRACTION_BAND = (0.15, 0.25)


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class FlatLine:
    clip_id: str
    object_label: str
    words: tuple[str, ...]

    @property
    def key(self) -> str:
        return f"{self.clip_id}#{self.object_label}"


@dataclass(frozen=True)
class MaskedLine:
    clip_id: str
    object_label: str
    words: tuple[str, ...]
    targets: tuple[tuple[int, str], ...]

    @property
    def key(self) -> str:
        return f"{self.clip_id}#{self.object_label}"

    def original_words(self) -> tuple[str, ...]:
        words = list(self.words)
        for pos, original in self.targets:
            words[pos] = original
        return tuple(words)


def _split_key(field: str, line_no: int) -> tuple[str, str]:
    if "#" not in field:
        raise CorpusError(f"line {line_no}: key {field!r} lacks '#'")
    clip_id, object_label = field.split("#", 1)
    return clip_id, object_label


def read_flat_corpus(path) -> list[FlatLine]:
    lines = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            stripped = raw.rstrip("\n")
            if not stripped:
                continue
            parts = stripped.split("\t")
            if len(parts) != 2:
                raise CorpusError(f"line {line_no}: expected one tab")
            clip_id, object_label = _split_key(parts[0], line_no)
            lines.append(FlatLine(clip_id, object_label,
                                  tuple(parts[1].split())))
    return lines


def read_masked_corpus(path) -> list[MaskedLine]:
    lines = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            stripped = raw.rstrip("\n")
            if not stripped:
                continue
            parts = stripped.split("\t")
            if len(parts) != 3:
                raise CorpusError(f"line {line_no}: expected two tabs")
            clip_id, object_label = _split_key(parts[0], line_no)
            words = tuple(parts[1].split())
            targets = []
            for item in parts[2].split():
                pos_text, original = item.split(":", 1)
                pos = int(pos_text)
                if pos >= len(words):
                    raise CorpusError(
                        f"line {line_no}: target position {pos} out of range")
                if words[pos] != MASK_LITERAL:
                    raise CorpusError(
                        f"line {line_no}: target {pos} is not {MASK_LITERAL}")
                targets.append((pos, original))
            lines.append(MaskedLine(clip_id, object_label, words,
                                    tuple(targets)))
    return lines


def value_word_count(n_words: int) -> int:
    """Value words in a (possibly truncated) flat line of n words."""
    full, rest = divmod(n_words, STEP_WORDS)
    count = full * len(VALUE_OFFSETS)
    count += sum(1 for off in range(rest) if off in VALUE_OFFSETS)
    return count


def mask_fraction(lines: list[MaskedLine]) -> float:
    total = sum(value_word_count(len(line.words)) for line in lines)
    if total == 0:
        raise CorpusError("corpus has no value words")
    masked = sum(len(line.targets) for line in lines)
    return masked / total


def check_mask_fraction(lines: list[MaskedLine]) -> float:
    fraction = mask_fraction(lines)
    lo, hi = MASK_FRACTION_BAND
    if not lo <= fraction <= hi:
        raise CorpusError(
            f"masked fraction {fraction:.3f} outside the [{lo}, {hi}] "
            "sanity band; is the corpus masked at the expected rate?")
    return fraction


def corpus_vocabulary(lines: list[FlatLine]) -> list[str]:
    """All distinct words, in first-seen order."""
    seen: dict[str, None] = {}
    for line in lines:
        for word in line.words:
            seen.setdefault(word, None)
    return list(seen)
