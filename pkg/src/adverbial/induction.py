"""Batch-wise induction of indicator rules by exhaustive search.

Each balanced batch (10 adverb + 10 antonym behaviours) is explained by a
pair of candidate rules, one per class, drawn from a bias's full
hypothesis space plus the bodyless rule (which fires on everything). A
behaviour is classified as the adverb iff the adverb rule fires (a
simultaneous antonym firing is broken toward the adverb, matching the
tie convention used everywhere else); as the antonym iff only the antonym
rule fires; a behaviour firing neither rule counts as misclassified.

Candidate pairs are scored by (misclassified count, total body literals,
lexicographic payload) and the minimum wins. If the winner classifies at
most half the batch correctly, or both its rules are bodyless, the batch
contributes no indicators; otherwise the winner's non-bodyless rules are
recorded. Duplicates across batches are preserved deliberately: the
multiset count is a rough rule-strength signal for the downstream
classifier.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .behaviour import ObjectBehaviour
from .buckets import BucketScheme
from .errors import DataError, InsufficientDataError
from .rules import (BIAS_ORDER, Bias, IndicatorRule, rule_fires, rule_payload)

BATCH_CLASS_SIZE = 10


@dataclass(frozen=True)
class Batch:
    """One balanced rule-induction problem."""

    pair: tuple[str, str]
    positives: tuple[ObjectBehaviour, ...]
    negatives: tuple[ObjectBehaviour, ...]
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not self.positives or len(self.positives) != len(self.negatives):
            raise DataError(
                f"batch must be balanced and nonempty, got "
                f"{len(self.positives)}+{len(self.negatives)}")


@dataclass
class InducedRuleSet:
    """Multiset of indicator rules for one adverb/antonym pair."""

    pair: tuple[str, str]
    rules: list[IndicatorRule] = field(default_factory=list)

    def bias_counts(self) -> dict[str, int]:
        counts = {bias.value: 0 for bias in BIAS_ORDER}
        for rule in self.rules:
            counts[rule.bias.value] += 1
        return counts

    def __len__(self) -> int:
        return len(self.rules)


def sample_batches(positives: list[ObjectBehaviour],
                   negatives: list[ObjectBehaviour],
                   pair: tuple[str, str],
                   seed: int) -> list[Batch]:
    """Stream balanced batches through a seeded shuffle of each class.

    Produces floor(min(n_pos, n_neg) / 10) batches, each sampling without
    replacement within the stream.
    """
    if len(positives) < BATCH_CLASS_SIZE or len(negatives) < BATCH_CLASS_SIZE:
        raise InsufficientDataError(
            f"pair {pair[0]}/{pair[1]}: need at least {BATCH_CLASS_SIZE} "
            f"behaviours per class, got {len(positives)}+{len(negatives)}")
    rng = random.Random(seed)
    pos = list(positives)
    neg = list(negatives)
    rng.shuffle(pos)
    rng.shuffle(neg)
    n_batches = min(len(pos), len(neg)) // BATCH_CLASS_SIZE
    batches = []
    for i in range(n_batches):
        lo, hi = i * BATCH_CLASS_SIZE, (i + 1) * BATCH_CLASS_SIZE
        batches.append(Batch(pair=pair,
                             positives=tuple(pos[lo:hi]),
                             negatives=tuple(neg[lo:hi]),
                             rng_seed=seed))
    return batches


def enumerate_rules(bias: Bias, scheme: BucketScheme,
                    head_class: str) -> list[IndicatorRule]:
    """The full (tiny) hypothesis space of one bias for one head class."""
    rules: list[IndicatorRule] = []
    if bias in (Bias.MAGNITUDE, Bias.OPERATION_AREA):
        names = (scheme.mag_names if bias is Bias.MAGNITUDE
                 else scheme.area_names)
        options: list[str | None] = [None, *names]
        for li, lower in enumerate(options):
            for ui, upper in enumerate(options):
                if lower is None and upper is None:
                    continue
                if lower is not None and upper is not None and li > ui:
                    continue
                rules.append(IndicatorRule(head_class=head_class, bias=bias,
                                           lower=lower, upper=upper))
    elif bias is Bias.ANGLE:
        for anchor in scheme.sector_names:
            for cw in range(0, 9):
                for acw in range(0, 9):
                    covered = {d % 8 for d in range(0, cw + 1)}
                    covered.update((-d) % 8 for d in range(0, acw + 1))
                    if len(covered) >= 8:
                        continue
                    rules.append(IndicatorRule(head_class=head_class,
                                               bias=bias, anchor=anchor,
                                               cw_reach=cw, acw_reach=acw))
    else:
        verticals: list[str | None] = ["top", "bottom", None]
        horizontals: list[str | None] = ["left", "right", None]
        for level in range(3):
            for vert in verticals:
                for horiz in horizontals:
                    if vert is None and horiz is None:
                        continue
                    rules.append(IndicatorRule(head_class=head_class,
                                               bias=bias, level=level,
                                               vert=vert, horiz=horiz))
    return rules


def _fire_mask(rule: IndicatorRule | None,
               behaviours: list[ObjectBehaviour],
               scheme: BucketScheme, full_mask: int) -> int:
    if rule is None:  # bodyless: fires on every behaviour
        return full_mask
    mask = 0
    for i, b in enumerate(behaviours):
        if rule_fires(rule, b, scheme):
            mask |= 1 << i
    return mask


def _pair_payload(adv: IndicatorRule | None, ant: IndicatorRule | None) -> str:
    return f"{'' if adv is None else rule_payload(adv)}||" \
           f"{'' if ant is None else rule_payload(ant)}"


@dataclass(frozen=True)
class InductionOutcome:
    """Winning rule pair of one (batch, bias) search, before filtering."""

    adverb_rule: IndicatorRule | None
    antonym_rule: IndicatorRule | None
    correct: int
    total: int
    body_literals: int

    @property
    def accepted(self) -> bool:
        trivial = self.adverb_rule is None and self.antonym_rule is None
        return not trivial and 2 * self.correct > self.total

    def rules(self) -> list[IndicatorRule]:
        if not self.accepted:
            return []
        return [r for r in (self.adverb_rule, self.antonym_rule)
                if r is not None]


def search_bias(batch: Batch, bias: Bias,
                scheme: BucketScheme) -> InductionOutcome:
    """Exhaustively score all candidate rule pairs for one bias."""
    adverb, antonym = batch.pair
    behaviours = list(batch.positives) + list(batch.negatives)
    n = len(behaviours)
    n_pos = len(batch.positives)
    full_mask = (1 << n) - 1
    pos_mask = (1 << n_pos) - 1
    neg_mask = full_mask ^ pos_mask

    adv_candidates: list[IndicatorRule | None] = [None]
    adv_candidates += enumerate_rules(bias, scheme, adverb)
    ant_candidates: list[IndicatorRule | None] = [None]
    ant_candidates += enumerate_rules(bias, scheme, antonym)
    adv_fires = [_fire_mask(c, behaviours, scheme, full_mask)
                 for c in adv_candidates]
    ant_fires = [_fire_mask(c, behaviours, scheme, full_mask)
                 for c in ant_candidates]
    adv_lits = [0 if c is None else c.body_literal_count()
                for c in adv_candidates]
    ant_lits = [0 if c is None else c.body_literal_count()
                for c in ant_candidates]

    best_cost: tuple[int, int] | None = None
    ties: list[tuple[int, int]] = []
    for ai, fa in enumerate(adv_fires):
        classified_adv = fa  # simultaneous firings resolve to the adverb
        pos_correct = (classified_adv & pos_mask).bit_count()
        for bi, fb in enumerate(ant_fires):
            correct = pos_correct + (fb & ~fa & neg_mask).bit_count()
            cost = (n - correct, adv_lits[ai] + ant_lits[bi])
            if best_cost is None or cost < best_cost:
                best_cost = cost
                ties = [(ai, bi)]
            elif cost == best_cost:
                ties.append((ai, bi))

    ai, bi = min(ties, key=lambda ab: _pair_payload(adv_candidates[ab[0]],
                                                    ant_candidates[ab[1]]))
    return InductionOutcome(
        adverb_rule=adv_candidates[ai],
        antonym_rule=ant_candidates[bi],
        correct=n - best_cost[0],
        total=n,
        body_literals=best_cost[1],
    )


def induce_for_bias(batch: Batch, bias: Bias,
                    scheme: BucketScheme) -> list[IndicatorRule]:
    """Indicator rules of the winning pair: empty when the winner explains
    at most half the batch or is entirely bodyless."""
    return search_bias(batch, bias, scheme).rules()


def collect_indicators(batches: list[Batch],
                       scheme: BucketScheme,
                       pair: tuple[str, str] | None = None) -> InducedRuleSet:
    """Multiset union over all batches and biases, in deterministic order
    (batch order, then magnitude/angle/operation-area/cell-occupancy)."""
    if pair is None:
        if not batches:
            raise DataError("cannot infer pair from zero batches")
        pair = batches[0].pair
    ruleset = InducedRuleSet(pair=pair)
    for batch in batches:
        if batch.pair != pair:
            raise DataError(f"batch pair {batch.pair} does not match {pair}")
        for bias in BIAS_ORDER:
            ruleset.rules.extend(induce_for_bias(batch, bias, scheme))
    return ruleset
