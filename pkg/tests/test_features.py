import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from adverbial.errors import DataError, EmbeddingError, InsufficientDataError
from adverbial.features import (EmbeddingTable, FeatureSource,
                                balance_by_repetition, build_feature,
                                check_summary_coverage, format_embeddings,
                                indicator_vector, parse_embeddings,
                                read_feature_csv, write_feature_csv)
from adverbial.induction import InducedRuleSet
from adverbial.rules import Bias, IndicatorRule
from conftest import make_behaviour


class TestEmbeddings:
    def test_two_entry_table(self):
        table = parse_embeddings("2 3\nrun 0.1 0.2 0.3\ncook 1 2 3\n")
        assert table.dim == 3
        assert set(table.entries) == {"run", "cook"}
        assert np.allclose(table.lookup("run"), [0.1, 0.2, 0.3])

    def test_ragged_line_names_position(self):
        with pytest.raises(EmbeddingError, match="line 3"):
            parse_embeddings("2 3\nrun 0.1 0.2 0.3\ncook 1 2\n")

    def test_duplicate_token_rejected(self):
        with pytest.raises(EmbeddingError, match="duplicate"):
            parse_embeddings("2 2\nrun 1 2\nrun 3 4\n")

    def test_header_count_checked(self):
        with pytest.raises(EmbeddingError, match="declares"):
            parse_embeddings("3 2\nrun 1 2\n")

    def test_missing_token_resolves_to_zeros_and_counts(self):
        table = parse_embeddings("1 2\nrun 1 2\n")
        vec = table.lookup("absent")
        assert np.array_equal(vec, np.zeros(2))
        assert table.miss_count == 1
        table.lookup("absent")
        assert table.miss_count == 2

    def test_format_round_trip(self):
        entries = {"a": [0.5, -1.0], "b": [2.0, 3.0]}
        table = parse_embeddings(format_embeddings(entries, 2))
        assert np.allclose(table.entries["a"], [0.5, -1.0])


def ruleset_of(*rules):
    rs = InducedRuleSet(pair=("adv", "ant"))
    rs.rules.extend(rules)
    return rs


MAG_RULE = IndicatorRule(head_class="adv", bias=Bias.MAGNITUDE,
                         lower="five_to_ten", upper="fifteen_to_twenty")
CELL_RULE = IndicatorRule(head_class="ant", bias=Bias.CELL_OCCUPANCY,
                          level=0, vert="top", horiz=None)


class TestIndicatorVector:
    def test_empty_rule_set_gives_empty_segment(self, scheme):
        bits = indicator_vector(make_behaviour(), ruleset_of(), scheme)
        assert bits.shape == (0,)

    def test_firing_pattern(self, scheme):
        b = make_behaviour(mag=7.0)  # fires MAG_RULE and CELL_RULE (top)
        bits = indicator_vector(b, ruleset_of(MAG_RULE, CELL_RULE), scheme)
        assert bits.tolist() == [1.0, 1.0]

    def test_toy_strange_person_fires_first_rule_only(self, scheme):
        other = IndicatorRule(head_class="ant", bias=Bias.MAGNITUDE,
                              lower="twenty_to_twenty_five")
        b = make_behaviour(mag=7.0)
        bits = indicator_vector(b, ruleset_of(MAG_RULE, other), scheme)
        assert bits.tolist() == [1.0, 0.0]

    def test_duplicates_occupy_distinct_positions(self, scheme):
        bits = indicator_vector(make_behaviour(mag=7.0),
                                ruleset_of(MAG_RULE, MAG_RULE, MAG_RULE),
                                scheme)
        assert bits.tolist() == [1.0, 1.0, 1.0]

    def test_permuting_rules_permutes_bits(self, scheme):
        rules = [MAG_RULE, CELL_RULE,
                 IndicatorRule(head_class="x", bias=Bias.ANGLE, anchor="s")]
        b = make_behaviour(mag=7.0, sector="n")
        base = indicator_vector(b, ruleset_of(*rules), scheme)
        perm = [2, 0, 1]
        permuted = indicator_vector(
            b, ruleset_of(*(rules[i] for i in perm)), scheme)
        assert permuted.tolist() == [base[i] for i in perm]


class TestBalance:
    def test_three_versus_seven(self):
        a, b = balance_by_repetition([0, 1, 2], list(range(10, 17)))
        assert a == [0, 1, 2, 0, 1, 2, 0]
        assert len(b) == 7

    def test_equal_classes_unchanged(self):
        a, b = balance_by_repetition([1, 2, 3, 4, 5], [6, 7, 8, 9, 10])
        assert a == [1, 2, 3, 4, 5]
        assert b == [6, 7, 8, 9, 10]

    def test_single_sample_repeats(self):
        a, b = balance_by_repetition(["x"], [1, 2, 3, 4])
        assert a == ["x"] * 4

    def test_empty_class_rejected(self):
        with pytest.raises(InsufficientDataError):
            balance_by_repetition([], [1])

    @given(st.lists(st.integers(), min_size=1, max_size=30),
           st.lists(st.integers(), min_size=1, max_size=30))
    def test_never_drops_and_equalizes(self, a, b):
        a2, b2 = balance_by_repetition(a, b)
        assert len(a2) == len(b2) == max(len(a), len(b))
        assert set(a2) == set(a) and set(b2) == set(b)


class TestBuildFeature:
    def table(self):
        return parse_embeddings("2 3\nrun 1 0 0\ncook 0 1 0\n")

    def test_layout_is_bits_then_embedding(self, scheme):
        f = build_feature(make_behaviour(mag=7.0), "adv", ("adv", "ant"),
                          "run", self.table(), scheme,
                          ruleset=ruleset_of(MAG_RULE))
        assert f.values.tolist() == [1.0, 1.0, 0.0, 0.0]
        assert f.source is FeatureSource.INDICATOR

    def test_summary_source(self, scheme):
        b = make_behaviour(clip="clipZ", label="person")
        summaries = EmbeddingTable(dim=2, entries={
            "clipZ#person": np.array([0.25, 0.75])})
        f = build_feature(b, "adv", ("adv", "ant"), "cook", self.table(),
                          scheme, summaries=summaries)
        assert f.values.tolist() == [0.25, 0.75, 0.0, 1.0, 0.0]
        assert f.source is FeatureSource.SUMMARY

    def test_missing_summary_key_fails_fast(self, scheme):
        summaries = EmbeddingTable(dim=2, entries={})
        with pytest.raises(DataError, match="summary"):
            build_feature(make_behaviour(), "adv", ("adv", "ant"), "run",
                          self.table(), scheme, summaries=summaries)

    def test_coverage_check_lists_missing_keys(self):
        summaries = EmbeddingTable(dim=2, entries={})
        b1 = make_behaviour(clip="c1", label="dog")
        b2 = make_behaviour(clip="c2", label="cat")
        with pytest.raises(DataError, match="c1#dog.*c2#cat"):
            check_summary_coverage([b1, b2], summaries)

    def test_exactly_one_source_required(self, scheme):
        with pytest.raises(DataError):
            build_feature(make_behaviour(), "adv", ("adv", "ant"), "run",
                          self.table(), scheme)


class TestFeatureCsv:
    def test_round_trip(self, tmp_path, scheme):
        table = parse_embeddings("1 2\nrun 0.5 0.25\n")
        feats = [build_feature(make_behaviour(clip=f"c{i}", mag=7.0), "adv",
                               ("adv", "ant"), "run", table, scheme,
                               ruleset=ruleset_of(MAG_RULE))
                 for i in range(3)]
        path = tmp_path / "f.csv"
        write_feature_csv(path, feats)
        rows = read_feature_csv(path, ("adv", "ant"),
                                FeatureSource.INDICATOR)
        assert len(rows) == 3
        assert rows[0].clip_id == "c0"
        assert rows[0].label == "adv"
        assert np.allclose(rows[0].values, feats[0].values)

    def test_inconsistent_lengths_rejected(self, tmp_path, scheme):
        table = parse_embeddings("1 2\nrun 0.5 0.25\n")
        f1 = build_feature(make_behaviour(), "adv", ("adv", "ant"), "run",
                           table, scheme, ruleset=ruleset_of(MAG_RULE))
        f2 = build_feature(make_behaviour(), "adv", ("adv", "ant"), "run",
                           table, scheme, ruleset=ruleset_of())
        with pytest.raises(DataError, match="length"):
            write_feature_csv(tmp_path / "f.csv", [f1, f2])
