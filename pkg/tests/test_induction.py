import itertools

import pytest

from adverbial.buckets import DEFAULT_SCHEME
from adverbial.errors import DataError, InsufficientDataError
from adverbial.induction import (BATCH_CLASS_SIZE, Batch, collect_indicators,
                                 enumerate_rules, induce_for_bias,
                                 sample_batches, search_bias)
from adverbial.rules import BIAS_ORDER, Bias, IndicatorRule, rule_fires
from conftest import make_behaviour


def mag_behaviour(label, mag, clip="c"):
    return make_behaviour(label=label, clip=clip, mag=mag)


def toy_batch():
    """Four objects, one magnitude fact each: the 5-to-20 range splits
    strange from not_strange."""
    return Batch(pair=("strange", "not_strange"),
                 positives=(mag_behaviour("person", 7.0),
                            mag_behaviour("cat", 18.0)),
                 negatives=(mag_behaviour("car", 3.0),
                            mag_behaviour("plane", 25.0)))


class TestSampleBatches:
    def two_classes(self, n_pos, n_neg):
        pos = [mag_behaviour(f"p{i}", 7.0, clip=f"c{i}") for i in range(n_pos)]
        neg = [mag_behaviour(f"n{i}", 3.0, clip=f"d{i}") for i in range(n_neg)]
        return pos, neg

    def test_batch_count_is_floor_min_over_ten(self):
        pos, neg = self.two_classes(35, 52)
        batches = sample_batches(pos, neg, ("a", "b"), seed=1)
        assert len(batches) == 3

    def test_ten_ten_is_one_batch_with_everything(self):
        pos, neg = self.two_classes(10, 10)
        (batch,) = sample_batches(pos, neg, ("a", "b"), seed=5)
        assert sorted(b.object_label for b in batch.positives) == \
            sorted(b.object_label for b in pos)
        assert len(batch.negatives) == 10

    def test_same_seed_same_batches(self):
        pos, neg = self.two_classes(30, 30)
        first = sample_batches(pos, neg, ("a", "b"), seed=9)
        second = sample_batches(pos, neg, ("a", "b"), seed=9)
        assert first == second

    def test_batches_sample_without_replacement(self):
        pos, neg = self.two_classes(30, 30)
        batches = sample_batches(pos, neg, ("a", "b"), seed=2)
        seen = [b.object_label for batch in batches
                for b in batch.positives]
        assert len(seen) == len(set(seen))

    def test_insufficient_data(self):
        pos, neg = self.two_classes(9, 30)
        with pytest.raises(InsufficientDataError):
            sample_batches(pos, neg, ("a", "b"), seed=0)

    def test_batch_must_be_balanced(self):
        pos, _ = self.two_classes(2, 0)
        with pytest.raises(DataError, match="balanced"):
            Batch(pair=("a", "b"), positives=tuple(pos), negatives=())


class TestHypothesisSpaces:
    def test_range_space_is_quadratic_in_buckets(self):
        rules = enumerate_rules(Bias.MAGNITUDE, DEFAULT_SCHEME, "h")
        B = len(DEFAULT_SCHEME.mag_names)
        # lower-only (B) + upper-only (B) + bounded pairs (B*(B+1)/2)
        assert len(rules) == 2 * B + B * (B + 1) // 2

    def test_angle_space_respects_the_arc_cap(self):
        rules = enumerate_rules(Bias.ANGLE, DEFAULT_SCHEME, "h")
        assert len(rules) == 8 * 28  # 28 (cw, acw) pairs span < full circle
        assert all(len(r.arc_offsets()) < 8 for r in rules)

    def test_cell_space(self):
        rules = enumerate_rules(Bias.CELL_OCCUPANCY, DEFAULT_SCHEME, "h")
        assert len(rules) == 3 * 8  # 4 const-const + 2 free-vert + 2 free-horiz

    def test_every_candidate_has_a_body(self):
        for bias in BIAS_ORDER:
            for rule in enumerate_rules(bias, DEFAULT_SCHEME, "h"):
                assert rule.body_literal_count() >= 1


class TestToyInduction:
    def test_recovers_the_bounded_range_pair(self):
        outcome = search_bias(toy_batch(), Bias.MAGNITUDE, DEFAULT_SCHEME)
        assert outcome.correct == 4
        assert outcome.adverb_rule == IndicatorRule(
            head_class="strange", bias=Bias.MAGNITUDE,
            lower="five_to_ten", upper="fifteen_to_twenty")
        assert outcome.antonym_rule is None  # bodyless partner

    def test_returned_rules_drop_the_bodyless_member(self):
        rules = induce_for_bias(toy_batch(), Bias.MAGNITUDE, DEFAULT_SCHEME)
        assert rules == [IndicatorRule(
            head_class="strange", bias=Bias.MAGNITUDE,
            lower="five_to_ten", upper="fifteen_to_twenty")]

    def test_identical_class_multisets_yield_nothing(self):
        same = tuple(mag_behaviour(f"o{i}", 7.0) for i in range(3))
        batch = Batch(pair=("a", "b"), positives=same, negatives=same)
        for bias in BIAS_ORDER:
            assert induce_for_bias(batch, bias, DEFAULT_SCHEME) == []

    def test_indistinguishable_classes_never_beat_half(self):
        same = tuple(mag_behaviour(f"o{i}", 5.0 * i) for i in range(4))
        batch = Batch(pair=("a", "b"), positives=same, negatives=same)
        outcome = search_bias(batch, Bias.MAGNITUDE, DEFAULT_SCHEME)
        assert 2 * outcome.correct <= outcome.total


class TestPlantedCellRecovery:
    def test_vert_constant_horizontal_free(self):
        # adverb lives in the top half, split across both x halves so that
        # neither constant-horizontal pattern covers every positive
        def cell_behaviour(label, cy, cx):
            from adverbial.extraction import placement_path
            return make_behaviour(label=label,
                                  placement=placement_path(cx, cy))

        positives = tuple(cell_behaviour(f"p{i}", 0.2, 0.2 if i % 2 else 0.8)
                          for i in range(10))
        negatives = tuple(cell_behaviour(f"n{i}", 0.8, 0.2 if i % 2 else 0.8)
                          for i in range(10))
        batch = Batch(pair=("adv", "ant"), positives=positives,
                      negatives=negatives)
        rules = induce_for_bias(batch, Bias.CELL_OCCUPANCY, DEFAULT_SCHEME)
        assert rules == [IndicatorRule(head_class="adv",
                                       bias=Bias.CELL_OCCUPANCY,
                                       level=0, vert="top", horiz=None)]

    def test_exhaustive_search_matches_brute_force_oracle(self):
        # a second enumerator with reversed iteration order must find the
        # same optimal cost
        batch = toy_batch()
        best = search_bias(batch, Bias.MAGNITUDE, DEFAULT_SCHEME)
        behaviours = list(batch.positives) + list(batch.negatives)
        n_pos = len(batch.positives)
        candidates = [None] + enumerate_rules(Bias.MAGNITUDE, DEFAULT_SCHEME,
                                              "strange")
        antonyms = [None] + enumerate_rules(Bias.MAGNITUDE, DEFAULT_SCHEME,
                                            "not_strange")
        best_cost = None
        for ca, cb in itertools.product(reversed(candidates),
                                        reversed(antonyms)):
            correct = 0
            for i, b in enumerate(behaviours):
                fa = ca is None or rule_fires(ca, b, DEFAULT_SCHEME)
                fb = cb is None or rule_fires(cb, b, DEFAULT_SCHEME)
                if fa:
                    predicted = "strange"
                elif fb:
                    predicted = "not_strange"
                else:
                    predicted = None
                truth = "strange" if i < n_pos else "not_strange"
                correct += predicted == truth
            lits = ((0 if ca is None else ca.body_literal_count())
                    + (0 if cb is None else cb.body_literal_count()))
            cost = (len(behaviours) - correct, lits)
            if best_cost is None or cost < best_cost:
                best_cost = cost
        assert best_cost == (best.total - best.correct, best.body_literals)


class TestCollectIndicators:
    def test_zero_batches(self):
        ruleset = collect_indicators([], DEFAULT_SCHEME, pair=("a", "b"))
        assert len(ruleset) == 0

    def test_duplicates_preserved_across_batches(self):
        batches = [toy_batch() for _ in range(5)]
        ruleset = collect_indicators(batches, DEFAULT_SCHEME,
                                     pair=("strange", "not_strange"))
        assert len(ruleset.rules) == 5
        assert len(set(map(str, ruleset.rules))) == 1
        assert ruleset.bias_counts()["magnitude"] == 5

    def test_inseparable_classes_collect_nothing(self):
        same = tuple(mag_behaviour(f"o{i}", 7.0) for i in range(10))
        batch = Batch(pair=("a", "b"), positives=same, negatives=same)
        ruleset = collect_indicators([batch] * 3, DEFAULT_SCHEME,
                                     pair=("a", "b"))
        assert len(ruleset) == 0

    def test_deterministic_bias_order(self):
        # a batch separable by both magnitude and angle emits magnitude
        # rules before angle rules
        positives = tuple(make_behaviour(label=f"p{i}", mag=7.0, sector="n")
                          for i in range(10))
        negatives = tuple(make_behaviour(label=f"n{i}", mag=30.0, sector="s")
                          for i in range(10))
        batch = Batch(pair=("a", "b"), positives=positives,
                      negatives=negatives)
        ruleset = collect_indicators([batch], DEFAULT_SCHEME, pair=("a", "b"))
        biases = [r.bias for r in ruleset.rules]
        assert biases == sorted(biases, key=BIAS_ORDER.index)
        assert Bias.MAGNITUDE in biases and Bias.ANGLE in biases

    def test_mismatched_batch_pair_rejected(self):
        with pytest.raises(DataError, match="pair"):
            collect_indicators([toy_batch()], DEFAULT_SCHEME, pair=("x", "y"))


def test_induction_is_deterministic():
    batch = toy_batch()
    results = [induce_for_bias(batch, bias, DEFAULT_SCHEME)
               for bias in BIAS_ORDER for _ in range(2)]
    for a, b in zip(results[::2], results[1::2]):
        assert a == b


def test_batch_class_size_is_ten():
    assert BATCH_CLASS_SIZE == 10
