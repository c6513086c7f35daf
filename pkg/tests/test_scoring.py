"""Micro precision/recall/F1, pair scoring, and element accuracy."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synquad import EvalReport, MatchCounts, element_accuracy, match_items, match_quads, micro_scores, pair_scores

from oracles import brute_force_counts, brute_force_micro


def test_match_items_multiset_semantics():
    assert match_items(["x", "x"], ["x"]) == MatchCounts(1, 1, 2)
    assert match_items(["x"], ["x", "x", "x"]) == MatchCounts(1, 3, 1)
    assert match_items([], ["x"]) == MatchCounts(0, 1, 0)
    assert match_items(["x"], []) == MatchCounts(0, 0, 1)
    assert match_items([], []) == MatchCounts(0, 0, 0)


def test_match_quads_on_tuples():
    gold = [("a", "b", "c", "negative")]
    assert match_quads(gold, list(gold)) == MatchCounts(1, 1, 1)


def test_match_counts_validation_and_addition():
    with pytest.raises(ValueError):
        MatchCounts(2, 1, 1)
    with pytest.raises(ValueError):
        MatchCounts(-1, 0, 0)
    assert MatchCounts(1, 2, 2) + MatchCounts(1, 1, 2) == MatchCounts(2, 3, 4)


def test_micro_scores_derived_oracle():
    """Two sentences: (tp=1, pred=2, gold=2) and (tp=1, pred=1, gold=2).

    Micro P = 2/3, R = 1/2, F1 = 2*(2/3)*(1/2) / (2/3 + 1/2) = 4/7.
    """
    counts = {"s1": MatchCounts(1, 2, 2), "s2": MatchCounts(1, 1, 2)}
    report = micro_scores(counts)
    assert report.precision == pytest.approx(2 / 3)
    assert report.recall == pytest.approx(1 / 2)
    assert report.f1 == pytest.approx(4 / 7)
    assert report.counts == MatchCounts(2, 3, 4)
    assert report.per_sentence["s1"] == MatchCounts(1, 2, 2)


def test_micro_scores_zero_cases():
    empty = micro_scores({})
    assert (empty.precision, empty.recall, empty.f1) == (0.0, 0.0, 0.0)
    nothing_predicted = micro_scores({"s": MatchCounts(0, 0, 3)})
    assert nothing_predicted.precision == 0.0
    assert nothing_predicted.f1 == 0.0


def test_micro_scores_accepts_iterable_and_malformed():
    report = micro_scores([MatchCounts(1, 1, 1)], malformed_count=4)
    assert report.f1 == 1.0
    assert report.malformed_count == 4
    assert report.per_sentence == {}


def test_report_table_formats_percentages():
    counts = {"s1": MatchCounts(1, 2, 2), "s2": MatchCounts(1, 1, 2)}
    table = micro_scores(counts).table("quad scores")
    assert "quad scores" in table
    assert "66.7" in table
    assert "50.0" in table
    assert "57.1" in table


def test_report_to_dict_roundtrip_fields():
    report = micro_scores({"s": MatchCounts(1, 1, 1)}, malformed_count=2)
    document = report.to_dict()
    assert document["precision"] == 1.0
    assert document["true_positives"] == 1
    assert document["malformed_count"] == 2


def test_pair_scores_dedupes_both_sides():
    gold = [("service", "ok"), ("service", "ok"), ("bathroom", "filthy")]
    pred = [("service", "ok"), ("service", "ok")]
    report = pair_scores(gold, pred)
    assert report.counts == MatchCounts(1, 1, 2)


def test_element_accuracy_positional():
    gold = [("a", "o", "food quality", "positive"), ("b", "p", "service general", "negative")]
    pred = [("x", "y", "food quality", "negative"), ("z", "w", "service general", "negative")]
    assert element_accuracy(gold, pred, "category") == 1.0
    assert element_accuracy(gold, pred, "sentiment") == 0.5
    assert element_accuracy(gold, pred, "aspect") == 0.0


def test_element_accuracy_rejects_length_mismatch():
    with pytest.raises(ValueError, match="length"):
        element_accuracy([("a", "o", "c", "s")], [], "category")


def test_element_accuracy_empty_gold_is_perfect():
    assert element_accuracy([], [], "sentiment") == 1.0


def test_element_accuracy_rejects_unknown_element():
    with pytest.raises(ValueError):
        element_accuracy([], [], "flavor")


_item = st.tuples(
    st.sampled_from(["a", "b", "c", "d", "e"]),
    st.sampled_from(["x", "y", "z"]),
)
_instance = st.tuples(st.lists(_item, max_size=6), st.lists(_item, max_size=6))


@settings(max_examples=200, deadline=None)
@given(st.lists(_instance, max_size=8))
def test_micro_scores_match_brute_force(instances):
    counts = [match_items(gold, pred) for gold, pred in instances]
    report = micro_scores(counts)
    for (gold, pred), count in zip(instances, counts):
        assert (count.true_positives, count.predicted_total, count.gold_total) == brute_force_counts(gold, pred)
    precision, recall, f1 = brute_force_micro(instances)
    assert report.precision == precision
    assert report.recall == recall
    assert report.f1 == f1
