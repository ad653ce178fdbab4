from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from batchcolor.core.errors import ParameterError
from batchcolor.core.graph import validate_coloring
from batchcolor.core.intervals import Interval, closed, interval_graph, interval_instance, max_clique_size
from batchcolor.services.engine import run_duel, run_instance
from batchcolor.services.interval_adversaries import IntervalKTAdversary
from batchcolor.services.two_batches import (Region, SecondBatchState, TwoBatchesColorer, check_loop_invariant,
                                             color_first_batch, color_second_batch, create_chains,
                                             first_batch_span_colors, install_dummy_cliques, overlapping_pair,
                                             partition_into_chains)
from tests.strategies import intervals


def two_intervals_each_side():
    return [closed(0, 1, "p1"), closed(0, 1, "p2"), closed(4, 5, "r1"), closed(4, 5, "r2")]


def test_stack_reuses_the_most_recently_released_color():
    assert color_first_batch([closed(0, 2, "a"), closed(1, 3, "b"), closed(4, 5, "c")]) == {"a": 1, "b": 2, "c": 2}
    # First-Fit would give c color 1 here
    assert color_first_batch([closed(0, 2, "a"), closed(1, 3, "b"), closed(4, 6, "c")])["c"] == 2


def test_single_interval_gets_color_one():
    assert color_first_batch([closed(3, 4, "a")]) == {"a": 1}


def test_dummy_cliques_sit_outside_every_real_endpoint():
    dummies = install_dummy_cliques([closed(0, 10, "a")], 1)
    (left,), (right,) = dummies.left, dummies.right
    assert (left.lo, left.hi) == (-2, -1)
    assert (right.lo, right.hi) == (11, 12)


def test_left_dummy_clique_uses_every_color():
    dummies = install_dummy_cliques([closed(0, 1, "a")], 3)
    assert sorted(dummies.colors[iv.id] for iv in dummies.left) == [1, 2, 3]
    assert dummies.colors["a"] == 1


def test_dummies_alone_for_an_empty_first_batch():
    dummies = install_dummy_cliques([], 2, [closed(0, 1, "x"), closed(0, 1, "y")])
    assert set(dummies.colors) == {iv.id for iv in dummies.left + dummies.right}


def test_chains_are_padded_to_omega():
    assert partition_into_chains([closed(2, 3, "x")], 2) == [["x"], []]
    assert partition_into_chains([closed(0, 2, "x"), closed(1, 3, "y")], 2) == [["x"], ["y"]]


def test_chains_follow_left_endpoint_first_fit():
    ivs = [closed(0, 1, "a"), closed(2, 3, "b"), Interval(Fraction(3, 2), Fraction(5, 2), True, True, "c")]
    assert partition_into_chains(ivs, 2) == [["a", "c"], ["b"]]


def test_short_second_interval_reuses_a_retired_color():
    batch1 = two_intervals_each_side()
    colors1 = color_first_batch(batch1)
    colors2 = color_second_batch(batch1, colors1, [closed(2, 3, "x")])
    assert colors2 == {"x": 1}
    assert len(set(colors1.values()) | set(colors2.values())) <= 3


def test_empty_second_batch():
    batch1 = two_intervals_each_side()
    assert color_second_batch(batch1, color_first_batch(batch1), []) == {}


def test_invariant_holds_before_anything_is_colored():
    batch1 = two_intervals_each_side()
    state = SecondBatchState(batch1, color_first_batch(batch1), [closed(2, 3, "x")])
    report = check_loop_invariant(state)
    assert report.ok
    assert report.i == 0


def test_reusing_an_unprocessed_color_breaks_the_invariant():
    batch1 = two_intervals_each_side()
    state = SecondBatchState(batch1, color_first_batch(batch1), [closed(2, 3, "x")])
    state.colored.add("x")
    state.colors2["x"] = 2
    report = check_loop_invariant(state)
    assert not report.ok
    assert report.clause == "fragment-color"
    assert report.witness["interval"] == "x"
    assert report.witness["color"] == 2


CHAIN_BATCH1 = [closed(0, 5, "a")]


def chain_state(batch2, i=1):
    state = SecondBatchState(CHAIN_BATCH1, color_first_batch(CHAIN_BATCH1), batch2)
    state.i = i
    return state


def test_create_chains_takes_the_chain_holding_the_first_uncovered_point():
    state = chain_state([closed(0, 1, "x"), closed(2, 3, "z")])
    p = state.line.point_ordinal(2)
    region = Region(0, state.line.size - 1, [["x"], [], ["z"]], [p])
    assert create_chains(region, state) == (0, 2)
    assert region.chains == [["x"], [], ["z"]]
    assert (state.swaps, state.crossovers) == (1, 0)


def test_empty_partner_picks_up_the_tail_holding_the_uncovered_point():
    state = chain_state([closed(0, 1, "x"), closed(2, 3, "z")])
    points = [state.line.point_ordinal(0), state.line.point_ordinal(2)]
    region = Region(0, state.line.size - 1, [["x"], [], ["z"]], points)
    assert create_chains(region, state) == (0, 1)
    assert region.chains == [["x"], ["z"], []]
    assert (state.swaps, state.crossovers) == (0, 1)


def test_crossover_exchanges_tails_right_of_the_violating_point():
    half = Fraction(3, 2)
    state = chain_state([closed(0, 1, "x1"), closed(4, 5, "x2"), Interval(0, half, True, True, "y"),
                         closed(2, 3, "z")])
    line = state.line
    gap = line.point_ordinal(half) + 1
    points = [line.point_ordinal(0), gap, line.point_ordinal(2), line.point_ordinal(4)]
    region = Region(0, line.size - 1, [["x1", "x2"], ["y"], ["z"]], points)
    assert create_chains(region, state) == (0, 1)
    assert region.chains == [["x1", "x2"], ["y", "z"], []]
    assert (state.swaps, state.crossovers) == (0, 1)
    assert all(overlapping_pair(state, chain) is None for chain in region.chains)


def test_chain_with_overlapping_intervals_breaks_the_invariant():
    state = chain_state([closed(0, 1, "x"), Interval(0, Fraction(3, 2), True, True, "y")], i=0)
    assert overlapping_pair(state, ["x", "y"]) == ("x", "y")
    state.regions[0].chains = [["x", "y"], []]
    report = check_loop_invariant(state)
    assert not report.ok
    assert report.clause == "chain-overlap"
    assert report.witness["intervals"] == ["x", "y"]


def test_diagnostics_record_each_iteration():
    batch1 = [closed(0, 3, "a"), closed(1, 4, "b"), closed(2, 5, "c"), closed(3, 6, "d")]
    instance = interval_instance([batch1, [closed(7, 8, "x"), closed(Fraction(15, 2), 9, "y")]])
    colorer = TwoBatchesColorer()
    report = run_instance(colorer, instance)
    assert report.diagnostics
    assert all(d["invariant"]["ok"] for d in report.diagnostics)
    assert report.distinct_colors <= 3 * report.opt_cost // 2


def test_a_third_batch_is_refused():
    instance = interval_instance([[closed(0, 1, "a")], [closed(2, 3, "b")], [closed(4, 5, "c")]])
    with pytest.raises(ParameterError):
        run_instance(TwoBatchesColorer(), instance)


def test_meets_the_two_batch_lower_bound_exactly():
    transcript = run_duel(TwoBatchesColorer(), IntervalKTAdversary(1))
    report = transcript.report
    assert report.opt_cost == 4
    assert report.distinct_colors == 6
    assert report.ratio == Fraction(3, 2)
    assert transcript.guarantee.passed


@st.composite
def two_batches(draw):
    first = draw(intervals(prefix="f", max_size=7))
    second = draw(intervals(prefix="s", max_size=7))
    return first, second


@settings(max_examples=60, deadline=None)
@given(two_batches())
def test_two_batches_stays_within_three_halves_of_omega(batches):
    first, second = batches
    instance = interval_instance([first, second])
    report = run_instance(TwoBatchesColorer(), instance)
    colors = report.coloring()
    omega = max_clique_size(first + second)
    assert validate_coloring(interval_graph(first + second), colors).ok
    assert len(set(colors.values())) <= 3 * omega // 2


@settings(max_examples=60, deadline=None)
@given(intervals(max_size=8))
def test_colors_between_cliques_come_from_the_rightmost_members(batch1):
    assert first_batch_span_colors(batch1, color_first_batch(batch1)) == []


@settings(max_examples=60, deadline=None)
@given(intervals(max_size=8))
def test_stack_coloring_uses_exactly_omega_colors(batch1):
    colors = color_first_batch(batch1)
    assert validate_coloring(interval_graph(batch1), colors).ok
    assert max(colors.values(), default=0) == max_clique_size(batch1)


@st.composite
def wide_two_batches(draw):
    first = draw(intervals(prefix="f", max_size=100, span=400))
    second = draw(intervals(prefix="s", max_size=100, span=400))
    return first, second


@pytest.mark.slow
@settings(max_examples=1000, deadline=None)
@given(wide_two_batches())
def test_two_batches_on_large_instances(batches):
    first, second = batches
    report = run_instance(TwoBatchesColorer(), interval_instance([first, second]))
    colors = report.coloring()
    assert validate_coloring(interval_graph(first + second), colors).ok
    assert len(set(colors.values())) <= 3 * max_clique_size(first + second) // 2


@pytest.mark.slow
@settings(max_examples=500, deadline=None)
@given(intervals(max_size=60, span=200))
def test_span_colors_on_large_first_batches(batch1):
    assert first_batch_span_colors(batch1, color_first_batch(batch1)) == []
