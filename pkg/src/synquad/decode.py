"""Parsing raw generation text back into structured pair and quad predictions.

Decoding is tolerant by contract: it never raises on content. Records that
do not carry the expected keys, in order, each with a non-empty value, are
counted malformed and dropped; everything else is normalized so downstream
matching compares like with like.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from functools import lru_cache

from .config import DEFAULT_END_MARKER
from .corpus import SENTIMENTS

PAIR_FIELDS_AO = ("aspect", "opinion")
PAIR_FIELDS_OA = ("opinion", "aspect")
QUAD_FIELDS = ("aspect", "opinion", "category", "sentiment")

_WHITESPACE_RE = re.compile(r"\s+")
_SEGMENT_SPLIT_RE = re.compile(r"\s*\|\s*")
_EDGE_CHARS = string.punctuation + string.whitespace


@dataclass(frozen=True)
class PairPrediction:
    aspect: str | None
    opinion: str | None

    def key(self) -> tuple:
        return (self.aspect, self.opinion)


@dataclass(frozen=True)
class QuadPrediction:
    aspect: str | None
    opinion: str | None
    category: str | None
    sentiment: str

    @property
    def sentiment_parseable(self) -> bool:
        return self.sentiment in SENTIMENTS

    def key(self) -> tuple:
        return (self.aspect, self.opinion, self.category, self.sentiment)


def normalize(value: str) -> str | None:
    """Lowercase, collapse whitespace, strip edge punctuation; "null" -> None."""
    collapsed = _WHITESPACE_RE.sub(" ", value.strip().lower())
    stripped = collapsed.strip(_EDGE_CHARS)
    if stripped == "null":
        return None
    return stripped


def strip_end_marker(text: str, end_marker: str = DEFAULT_END_MARKER) -> str:
    """Drop the end-of-sequence marker and anything generated after it."""
    if end_marker:
        cut = text.find(end_marker)
        if cut >= 0:
            return text[:cut]
    return text


@lru_cache(maxsize=64)
def _key_pattern(fields: tuple[str, ...]) -> re.Pattern:
    alternation = "|".join(re.escape(f) for f in sorted(fields, key=len, reverse=True))
    return re.compile(rf"\b({alternation})\s*:", re.IGNORECASE)


def _parse_segment(segment: str, fields: tuple[str, ...]) -> dict[str, str] | None:
    matches = list(_key_pattern(fields).finditer(segment))
    if tuple(m.group(1).lower() for m in matches) != fields:
        return None
    values = {}
    for position, match in enumerate(matches):
        end = matches[position + 1].start() if position + 1 < len(matches) else len(segment)
        value = segment[match.end() : end].strip().rstrip(",").strip()
        if not value:
            return None
        values[fields[position]] = value
    return values


def parse_records(
    text: str,
    expected_fields: tuple[str, ...] | list[str],
    *,
    end_marker: str = DEFAULT_END_MARKER,
    empty_literal: str = "none",
) -> tuple[list[dict[str, str]], int]:
    """Split raw output into key/value records.

    Returns (records, malformed_count). Never raises on content; only a bad
    expected_fields spec is an error.
    """
    fields = tuple(f.lower() for f in expected_fields)
    if not fields or len(set(fields)) != len(fields):
        raise ValueError(f"expected_fields must be non-empty and unique, got {expected_fields!r}")
    body = strip_end_marker(text or "", end_marker).strip()
    if not body or body.lower() == empty_literal:
        return [], 0
    records: list[dict[str, str]] = []
    malformed = 0
    for segment in _SEGMENT_SPLIT_RE.split(body):
        if not segment.strip():
            continue
        record = _parse_segment(segment, fields)
        if record is None:
            malformed += 1
        else:
            records.append(record)
    return records, malformed


def decode_pairs(
    text: str,
    direction: str = "ao",
    *,
    end_marker: str = DEFAULT_END_MARKER,
) -> tuple[list[PairPrediction], int]:
    """Decode extraction/linking output into normalized pairs."""
    fields = PAIR_FIELDS_AO if direction == "ao" else PAIR_FIELDS_OA
    records, malformed = parse_records(text, fields, end_marker=end_marker)
    pairs = []
    for record in records:
        aspect = normalize(record["aspect"])
        opinion = normalize(record["opinion"])
        if aspect == "" or opinion == "":
            malformed += 1
            continue
        pairs.append(PairPrediction(aspect, opinion))
    return pairs, malformed


def decode_quads(text: str, *, end_marker: str = DEFAULT_END_MARKER) -> tuple[list[QuadPrediction], int]:
    """Decode classification output into normalized quads.

    Sentiment values outside the polarity set are kept verbatim (they score
    as wrong), never coerced or dropped.
    """
    records, malformed = parse_records(text, QUAD_FIELDS, end_marker=end_marker)
    quads = []
    for record in records:
        aspect = normalize(record["aspect"])
        opinion = normalize(record["opinion"])
        category = normalize(record["category"])
        sentiment = normalize(record["sentiment"])
        if "" in (aspect, opinion, category, sentiment):
            malformed += 1
            continue
        if sentiment is None:
            sentiment = "null"
        quads.append(QuadPrediction(aspect, opinion, category, sentiment))
    return quads, malformed


def merge_bidirectional(
    ao: list[PairPrediction],
    oa: list[PairPrediction],
    strategy: str = "union",
) -> list[PairPrediction]:
    """Combine the two stage-1 generations; either way the result is dedup'd
    in first-seen order.
    """
    if strategy == "union":
        merged, seen = [], set()
        for pair in [*ao, *oa]:
            if pair.key() not in seen:
                seen.add(pair.key())
                merged.append(pair)
        return merged
    if strategy == "intersection":
        oa_keys = {p.key() for p in oa}
        merged, seen = [], set()
        for pair in ao:
            if pair.key() in oa_keys and pair.key() not in seen:
                seen.add(pair.key())
                merged.append(pair)
        return merged
    raise ValueError(f"unknown merge strategy {strategy!r}")
