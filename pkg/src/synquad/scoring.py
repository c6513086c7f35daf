"""Exact-match scoring at quad, pair, and element granularity.

Matching is multiset intersection over normalized tuples; micro averaging
sums match counts corpus-wide before dividing. Zero denominators score 0 by
convention.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence


@dataclass(frozen=True)
class MatchCounts:
    true_positives: int = 0
    predicted_total: int = 0
    gold_total: int = 0

    def __post_init__(self) -> None:
        if min(self.true_positives, self.predicted_total, self.gold_total) < 0:
            raise ValueError("counts must be non-negative")
        if self.true_positives > min(self.predicted_total, self.gold_total):
            raise ValueError("true_positives cannot exceed either total")

    def __add__(self, other: "MatchCounts") -> "MatchCounts":
        return MatchCounts(
            self.true_positives + other.true_positives,
            self.predicted_total + other.predicted_total,
            self.gold_total + other.gold_total,
        )


def match_items(gold: Iterable[Hashable], pred: Iterable[Hashable]) -> MatchCounts:
    """Multiset-intersection counts over any hashable items."""
    gold_counts = Counter(gold)
    pred_counts = Counter(pred)
    return MatchCounts(
        true_positives=sum((gold_counts & pred_counts).values()),
        predicted_total=sum(pred_counts.values()),
        gold_total=sum(gold_counts.values()),
    )


def match_quads(gold: Iterable[tuple], pred: Iterable[tuple]) -> MatchCounts:
    """Exact 4-field multiset matching over normalized quads."""
    return match_items(gold, pred)


@dataclass(frozen=True, eq=False)
class EvalReport:
    precision: float
    recall: float
    f1: float
    counts: MatchCounts
    per_sentence: Mapping[str, MatchCounts] = field(default_factory=dict)
    malformed_count: int = 0

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "true_positives": self.counts.true_positives,
            "predicted_total": self.counts.predicted_total,
            "gold_total": self.counts.gold_total,
            "malformed_count": self.malformed_count,
        }

    def table(self, title: str = "evaluation") -> str:
        """Human-readable two-row table with percentages to one decimal."""
        header = f"{title:<24}  {'P':>6}  {'R':>6}  {'F1':>6}"
        values = (
            f"{'':<24}  {self.precision * 100:>6.1f}  {self.recall * 100:>6.1f}  {self.f1 * 100:>6.1f}"
        )
        return f"{header}\n{values}"


def micro_scores(
    counts: Mapping[str, MatchCounts] | Iterable[MatchCounts],
    malformed_count: int = 0,
) -> EvalReport:
    """Aggregate per-sentence counts into one micro-averaged report."""
    if isinstance(counts, Mapping):
        per_sentence = dict(counts)
        parts = per_sentence.values()
    else:
        per_sentence = {}
        parts = list(counts)
    total = MatchCounts()
    for part in parts:
        total = total + part
    precision = total.true_positives / total.predicted_total if total.predicted_total else 0.0
    recall = total.true_positives / total.gold_total if total.gold_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EvalReport(precision, recall, f1, total, per_sentence, malformed_count)


def pair_scores(gold_pairs: Iterable[tuple], pred_pairs: Iterable[tuple]) -> EvalReport:
    """Pair-level report; both sides are dedup'd before matching because gold
    pairs legitimately repeat across quads that share an (aspect, opinion).
    """
    gold = list(dict.fromkeys(gold_pairs))
    pred = list(dict.fromkeys(pred_pairs))
    return micro_scores([match_items(gold, pred)])


def element_accuracy(
    gold_quads: Sequence[tuple],
    pred_quads: Sequence[tuple],
    element: str,
) -> float:
    """Positional accuracy for one quad element; the caller guarantees pred
    quads were produced from gold pairs so alignment is by position.
    """
    positions = {"aspect": 0, "opinion": 1, "category": 2, "sentiment": 3}
    if element not in positions:
        raise ValueError(f"element must be one of {sorted(positions)}, got {element!r}")
    if len(gold_quads) != len(pred_quads):
        raise ValueError(f"length mismatch: {len(gold_quads)} gold vs {len(pred_quads)} predicted")
    if not gold_quads:
        return 1.0
    index = positions[element]
    hits = sum(g[index] == p[index] for g, p in zip(gold_quads, pred_quads))
    return hits / len(gold_quads)
