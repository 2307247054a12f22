import pytest
from hypothesis import given
from hypothesis import strategies as st

from adverbial.buckets import DEFAULT_SCHEME
from adverbial.errors import DataError
from adverbial.rules import (Bias, IndicatorRule, arc_sectors,
                             format_rule_line, parse_rule_line, rule_fires,
                             rule_payload, rule_to_text)
from conftest import make_behaviour, make_step


def mag_rule(lower=None, upper=None, head="strange"):
    return IndicatorRule(head_class=head, bias=Bias.MAGNITUDE,
                         lower=lower, upper=upper)


class TestValidation:
    def test_range_needs_a_bound(self):
        with pytest.raises(DataError, match="bound"):
            mag_rule()

    def test_angle_full_circle_rejected(self):
        with pytest.raises(DataError, match="full circle"):
            IndicatorRule(head_class="h", bias=Bias.ANGLE, anchor="n",
                          cw_reach=8)
        with pytest.raises(DataError, match="full circle"):
            IndicatorRule(head_class="h", bias=Bias.ANGLE, anchor="n",
                          cw_reach=4, acw_reach=3)

    def test_cell_needs_a_constant(self):
        with pytest.raises(DataError, match="constant"):
            IndicatorRule(head_class="h", bias=Bias.CELL_OCCUPANCY, level=0)

    def test_cell_level_range(self):
        with pytest.raises(DataError, match="level"):
            IndicatorRule(head_class="h", bias=Bias.CELL_OCCUPANCY, level=3,
                          vert="top")


class TestRuleFires:
    def test_magnitude_in_range(self, scheme):
        rule = mag_rule(lower="five_to_ten", upper="fifteen_to_twenty")
        b = make_behaviour(mag=18.0)
        assert rule_fires(rule, b, scheme)

    def test_magnitude_below_range(self, scheme):
        rule = mag_rule(lower="five_to_ten", upper="fifteen_to_twenty")
        b = make_behaviour(steps=[make_step(t=1, mag=3.0),
                                  make_step(t=2, mag=4.9)])
        assert not rule_fires(rule, b, scheme)

    def test_existential_over_steps(self, scheme):
        rule = mag_rule(lower="five_to_ten", upper="five_to_ten")
        b = make_behaviour(steps=[make_step(t=1, mag=2.0),
                                  make_step(t=2, mag=7.0)])
        assert rule_fires(rule, b, scheme)

    def test_lower_bound_only(self, scheme):
        rule = mag_rule(lower="twenty_to_twenty_five")
        assert rule_fires(rule, make_behaviour(mag=55.0), scheme)
        assert not rule_fires(rule, make_behaviour(mag=7.0), scheme)

    def test_operation_area_range(self, scheme):
        rule = IndicatorRule(head_class="h", bias=Bias.OPERATION_AREA,
                             lower="medium")
        assert rule_fires(rule, make_behaviour(area="large"), scheme)
        assert not rule_fires(rule, make_behaviour(area="small"), scheme)

    def test_angle_arc(self, scheme):
        rule = IndicatorRule(head_class="h", bias=Bias.ANGLE, anchor="n",
                             cw_reach=1, acw_reach=1)
        assert arc_sectors(rule, scheme) == ["nw", "n", "ne"]
        assert rule_fires(rule, make_behaviour(sector="ne"), scheme)
        assert not rule_fires(rule, make_behaviour(sector="e"), scheme)

    def test_angle_arc_wraps_the_ring(self, scheme):
        rule = IndicatorRule(head_class="h", bias=Bias.ANGLE, anchor="nw",
                             cw_reach=2)
        assert arc_sectors(rule, scheme) == ["nw", "n", "ne"]

    def test_cell_free_component_matches_anything(self, scheme):
        rule = IndicatorRule(head_class="h", bias=Bias.CELL_OCCUPANCY,
                             level=0, vert=None, horiz="left")
        b = make_behaviour(placement=(("top", "left"), ("bottom", "right"),
                                      ("top", "left")))
        assert rule_fires(rule, b, scheme)

    def test_cell_constant_must_match(self, scheme):
        rule = IndicatorRule(head_class="h", bias=Bias.CELL_OCCUPANCY,
                             level=1, vert="top", horiz=None)
        b = make_behaviour(placement=(("top", "left"), ("bottom", "right"),
                                      ("top", "left")))
        assert not rule_fires(rule, b, scheme)

    @given(st.integers(min_value=0, max_value=10),
           st.integers(min_value=0, max_value=10),
           st.integers(min_value=0, max_value=2),
           st.integers(min_value=0, max_value=2),
           st.lists(st.floats(min_value=0, max_value=60), min_size=1,
                    max_size=6))
    def test_widening_a_range_never_unfires(self, lo, hi, dl, dh, mags):
        scheme = DEFAULT_SCHEME
        names = scheme.mag_names
        if lo > hi:
            lo, hi = hi, lo
        narrow = mag_rule(lower=names[lo], upper=names[hi])
        wide = mag_rule(lower=names[max(lo - dl, 0)],
                        upper=names[min(hi + dh, len(names) - 1)])
        steps = [make_step(t=i + 1, mag=round(m, 1))
                 for i, m in enumerate(mags)]
        b = make_behaviour(steps=steps)
        if rule_fires(narrow, b, scheme):
            assert rule_fires(wide, b, scheme)


class TestSerde:
    RULES = [
        mag_rule(lower="five_to_ten", upper="fifteen_to_twenty"),
        mag_rule(upper="zero_to_five", head="calm"),
        IndicatorRule(head_class="h", bias=Bias.OPERATION_AREA,
                      lower="medium", upper="large"),
        IndicatorRule(head_class="h", bias=Bias.ANGLE, anchor="sw",
                      cw_reach=2, acw_reach=1),
        IndicatorRule(head_class="h", bias=Bias.CELL_OCCUPANCY, level=2,
                      vert="bottom", horiz=None),
    ]

    @pytest.mark.parametrize("rule", RULES, ids=lambda r: r.bias.value)
    def test_line_round_trip(self, rule):
        line = format_rule_line(("a", "b"), rule)
        pair, again = parse_rule_line(line)
        assert pair == ("a", "b")
        assert again == rule

    def test_bad_line_rejected(self):
        with pytest.raises(DataError, match="line 3"):
            parse_rule_line("a|b", 3)

    def test_unknown_bias_rejected(self):
        with pytest.raises(DataError, match="bias"):
            parse_rule_line("a|b|frequency|head=a", 1)

    def test_payload_is_deterministic(self):
        rule = mag_rule(lower="five_to_ten")
        assert rule_payload(rule) == "head=strange|lower=five_to_ten|upper=*"


class TestRuleText:
    def test_magnitude_range(self, scheme):
        rule = mag_rule(lower="five_to_ten", upper="fifteen_to_twenty")
        assert rule_to_text(rule, scheme) == (
            "class(strange, V0) :- magnitude(V0, M0, T0), "
            "bucket_geq(M0, five_to_ten), bucket_leq(M0, fifteen_to_twenty).")

    def test_angle_arc(self, scheme):
        rule = IndicatorRule(head_class="upwards", bias=Bias.ANGLE,
                             anchor="n", cw_reach=1, acw_reach=1)
        assert rule_to_text(rule, scheme) == (
            "class(upwards, V0) :- angle(V0, A0, T0), "
            "sector_in(A0, [nw, n, ne]).")

    def test_cell_with_free_horizontal(self, scheme):
        rule = IndicatorRule(head_class="out", bias=Bias.CELL_OCCUPANCY,
                             level=0, vert="top", horiz=None)
        assert rule_to_text(rule, scheme) == (
            "class(out, V0) :- place(V0, 0, top, H1, T0).")


class TestBodyLiterals:
    def test_counts(self):
        assert mag_rule(lower="five_to_ten").body_literal_count() == 2
        assert mag_rule(lower="five_to_ten",
                        upper="fifty_plus").body_literal_count() == 3
        assert IndicatorRule(head_class="h", bias=Bias.ANGLE, anchor="n",
                             cw_reach=0, acw_reach=0).body_literal_count() == 1
        assert IndicatorRule(head_class="h", bias=Bias.ANGLE, anchor="n",
                             cw_reach=2, acw_reach=1).body_literal_count() == 3
        assert IndicatorRule(head_class="h", bias=Bias.CELL_OCCUPANCY,
                             level=0, vert="top").body_literal_count() == 1
