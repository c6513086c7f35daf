"""Corpus ingestion: ACOS-style quad annotations, CoNLL-U parses, and alignment.

Two source formats are read. Annotation files are tab-separated: a tokenized
sentence followed by zero or more quad fields of the form
"a_begin,a_end CATEGORY sentiment_index o_begin,o_end" with 0-based
end-exclusive spans and "-1,-1" marking implicit elements. Dependency parses
arrive as CoNLL-U. `align` zips the two into per-sentence graphs, the input
to every serialization and dataset-generation step.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .errors import AcosError, AlignmentError, ConlluError

NEGATIVE = "negative"
NEUTRAL = "neutral"
POSITIVE = "positive"
SENTIMENTS = (NEGATIVE, NEUTRAL, POSITIVE)

# Polarity integers are a property of the annotation release, not of the
# format, so the map is configurable.
DEFAULT_POLARITY_MAP: Mapping[int, str] = {0: NEGATIVE, 1: NEUTRAL, 2: POSITIVE}

# Rendering of implicit elements in every template.
NULL_LITERAL = "NULL"

IMPLICIT_SPAN_TEXT = "-1,-1"


class Token(NamedTuple):
    index: int  # 1-based; 0 is reserved for the virtual root
    surface: str


class Span(NamedTuple):
    """1-based inclusive token range."""

    begin: int
    end: int


class DependencyEdge(NamedTuple):
    head: int  # 0 for the virtual root
    dependent: int
    label: str


def normalize_category(raw: str) -> str:
    """Lowercase a raw label and turn '#' into a single space; underscores stay."""
    return raw.lower().replace("#", " ")


def denormalize_category(normalized: str) -> str:
    """Inverse of normalize_category, exact for canonical uppercase labels."""
    return normalized.upper().replace(" ", "#")


@dataclass(frozen=True)
class SentimentQuad:
    """One (aspect, opinion, category, sentiment) annotation.

    Spans are 1-based inclusive token ranges; None marks an implicit element.
    `category` holds the normalized label text.
    """

    aspect_span: Span | None
    opinion_span: Span | None
    category: str
    sentiment: str

    def __post_init__(self) -> None:
        if self.sentiment not in SENTIMENTS:
            raise ValueError(f"sentiment must be one of {SENTIMENTS}, got {self.sentiment!r}")
        for name, span in (("aspect", self.aspect_span), ("opinion", self.opinion_span)):
            if span is not None and not 1 <= span.begin <= span.end:
                raise ValueError(f"{name} span {span} is not a valid 1-based inclusive range")


def _validate_tokens(tokens: tuple[Token, ...]) -> None:
    if not tokens:
        raise ValueError("a sentence must contain at least one token")
    for position, token in enumerate(tokens, start=1):
        if token.index != position:
            raise ValueError(f"token indices must be contiguous 1..n, got {token.index} at position {position}")
        if not token.surface:
            raise ValueError(f"empty token surface at position {position}")
        if "\t" in token.surface or "\n" in token.surface:
            raise ValueError(f"token surface at position {position} contains tab or newline")


def _validate_quads(quads: tuple[SentimentQuad, ...], n: int) -> None:
    for quad in quads:
        for span in (quad.aspect_span, quad.opinion_span):
            if span is not None and span.end > n:
                raise ValueError(f"quad span {span} exceeds sentence length {n}")


def span_surface(tokens: tuple[Token, ...], span: Span | None) -> str:
    """Space-joined surface of a span, or the NULL literal for implicit spans."""
    if span is None:
        return NULL_LITERAL
    return " ".join(t.surface for t in tokens[span.begin - 1 : span.end])


@dataclass(frozen=True)
class AnnotatedSentence:
    """A tokenized sentence with its gold quads, before parse alignment."""

    sentence_id: str
    tokens: tuple[Token, ...]
    quads: tuple[SentimentQuad, ...]

    def __post_init__(self) -> None:
        _validate_tokens(self.tokens)
        _validate_quads(self.quads, len(self.tokens))

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    def surface(self, span: Span | None) -> str:
        return span_surface(self.tokens, span)


@dataclass(frozen=True)
class ParsedSentence:
    """Tokens plus dependency edges, as read from a CoNLL-U block."""

    tokens: tuple[Token, ...]
    edges: tuple[DependencyEdge, ...]

    def __post_init__(self) -> None:
        _validate_tokens(self.tokens)


@dataclass(frozen=True)
class SentenceGraph:
    """A sentence with dependency structure and gold quads; all serializations
    read from this type.

    Construction checks at most one head per token so hand-built partial
    graphs are representable; CoNLL-U loading guarantees exactly one.
    """

    sentence_id: str
    tokens: tuple[Token, ...]
    edges: tuple[DependencyEdge, ...]
    quads: tuple[SentimentQuad, ...] = ()

    def __post_init__(self) -> None:
        _validate_tokens(self.tokens)
        n = len(self.tokens)
        seen_dependents: set[int] = set()
        for edge in self.edges:
            if not 1 <= edge.dependent <= n:
                raise ValueError(f"edge dependent {edge.dependent} out of range 1..{n}")
            if not 0 <= edge.head <= n:
                raise ValueError(f"edge head {edge.head} out of range 0..{n}")
            if edge.head == edge.dependent:
                raise ValueError(f"token {edge.dependent} cannot head itself")
            if edge.dependent in seen_dependents:
                raise ValueError(f"token {edge.dependent} has more than one head")
            seen_dependents.add(edge.dependent)
        _validate_quads(self.quads, n)

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    def surface(self, span: Span | None) -> str:
        return span_surface(self.tokens, span)

    @cached_property
    def adjacency(self) -> tuple[tuple[bool, ...], ...]:
        """(n+1)x(n+1) symmetric boolean matrix; index 0 (virtual root) stays false."""
        n = len(self.tokens)
        matrix = [[False] * (n + 1) for _ in range(n + 1)]
        for edge in self.edges:
            if edge.head == 0:
                continue
            matrix[edge.head][edge.dependent] = True
            matrix[edge.dependent][edge.head] = True
        return tuple(tuple(row) for row in matrix)

    @cached_property
    def neighbor_map(self) -> Mapping[int, tuple[int, ...]]:
        """Undirected adjacency lists (root excluded), position-sorted."""
        linked: dict[int, set[int]] = {}
        for edge in self.edges:
            if edge.head == 0:
                continue
            linked.setdefault(edge.head, set()).add(edge.dependent)
            linked.setdefault(edge.dependent, set()).add(edge.head)
        return {index: tuple(sorted(peers)) for index, peers in linked.items()}


def _parse_span(text: str, n: int, line_no: int | None, path: str | None) -> Span | None:
    if text == IMPLICIT_SPAN_TEXT:
        return None
    begin_text, _, end_text = text.partition(",")
    try:
        begin, end = int(begin_text), int(end_text)
    except ValueError:
        raise AcosError(f"malformed span {text!r}", path=path, line_no=line_no) from None
    if not 0 <= begin < end <= n:
        raise AcosError(f"span {text!r} out of range for {n} tokens", path=path, line_no=line_no)
    return Span(begin + 1, end)


def _parse_quad_field(
    quad_field: str,
    n: int,
    category_set: Iterable[str] | None,
    polarity_map: Mapping[int, str],
    line_no: int | None,
    path: str | None,
) -> SentimentQuad:
    parts = quad_field.split(" ")
    if len(parts) != 4:
        raise AcosError(f"malformed quad field {quad_field!r}: expected 4 space-separated parts", path=path, line_no=line_no)
    aspect_text, raw_category, sentiment_text, opinion_text = parts
    aspect = _parse_span(aspect_text, n, line_no, path)
    opinion = _parse_span(opinion_text, n, line_no, path)
    try:
        sentiment_index = int(sentiment_text)
    except ValueError:
        raise AcosError(f"non-integer sentiment index {sentiment_text!r} in {quad_field!r}", path=path, line_no=line_no) from None
    if sentiment_index not in polarity_map:
        raise AcosError(
            f"sentiment index out of range: {sentiment_index} not in {sorted(polarity_map)}",
            path=path,
            line_no=line_no,
        )
    if category_set is not None and raw_category not in category_set:
        raise AcosError(
            f"unknown category {raw_category!r}; known: {sorted(category_set)}",
            path=path,
            line_no=line_no,
        )
    return SentimentQuad(aspect, opinion, normalize_category(raw_category), polarity_map[sentiment_index])


def parse_acos_line(
    line: str,
    category_set: Iterable[str] | None = None,
    *,
    polarity_map: Mapping[int, str] = DEFAULT_POLARITY_MAP,
    sentence_id: str = "",
    line_no: int | None = None,
    path: str | None = None,
) -> AnnotatedSentence:
    """Parse one annotation line into a validated AnnotatedSentence."""
    fields = line.rstrip("\n").split("\t")
    sentence_field = fields[0]
    if not sentence_field.strip():
        raise AcosError("empty sentence field", path=path, line_no=line_no)
    tokens = tuple(Token(i, s) for i, s in enumerate(sentence_field.split(" "), start=1))
    quads = tuple(
        _parse_quad_field(f, len(tokens), category_set, polarity_map, line_no, path)
        for f in fields[1:]
        if f.strip()
    )
    try:
        return AnnotatedSentence(sentence_id, tokens, quads)
    except ValueError as exc:
        raise AcosError(str(exc), path=path, line_no=line_no) from None


def render_acos_line(sentence: AnnotatedSentence, *, polarity_map: Mapping[int, str] = DEFAULT_POLARITY_MAP) -> str:
    """Inverse of parse_acos_line for canonical uppercase category labels."""
    index_of = {label: idx for idx, label in polarity_map.items()}

    def span_text(span: Span | None) -> str:
        if span is None:
            return IMPLICIT_SPAN_TEXT
        return f"{span.begin - 1},{span.end}"

    quad_fields = [
        f"{span_text(q.aspect_span)} {denormalize_category(q.category)} {index_of[q.sentiment]} {span_text(q.opinion_span)}"
        for q in sentence.quads
    ]
    return "\t".join([sentence.text, *quad_fields])


def load_acos(
    path: str | Path,
    category_set: Iterable[str] | None = None,
    *,
    polarity_map: Mapping[int, str] = DEFAULT_POLARITY_MAP,
    name: str | None = None,
) -> list[AnnotatedSentence]:
    """Load an annotation file; sentence ids are '<name>:<line_no>'."""
    path = Path(path)
    stem = name if name is not None else path.stem
    sentences = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            sentences.append(
                parse_acos_line(
                    line,
                    category_set,
                    polarity_map=polarity_map,
                    sentence_id=f"{stem}:{line_no}",
                    line_no=line_no,
                    path=str(path),
                )
            )
    return sentences


_CONLLU_COLUMNS = 10


def load_conllu(path: str | Path) -> list[ParsedSentence]:
    """Read CoNLL-U blocks into token/edge lists.

    Multiword-token ("1-2") and empty-node ("1.1") lines are skipped; only
    columns 1 (ID), 2 (FORM), 7 (HEAD), 8 (DEPREL) are consumed.
    """
    path = Path(path)
    sentences: list[ParsedSentence] = []
    rows: list[tuple[int, str, int, str, int]] = []

    def flush() -> None:
        if not rows:
            return
        n = len(rows)
        for position, (token_id, _, _, _, row_line) in enumerate(rows, start=1):
            if token_id != position:
                raise ConlluError(
                    f"token ids must be contiguous 1..n, got {token_id} at position {position}",
                    path=str(path),
                    line_no=row_line,
                )
        tokens = tuple(Token(i, form) for i, (_, form, _, _, _) in zip(range(1, n + 1), rows))
        edges = []
        for token_id, _, head, deprel, row_line in rows:
            if not 0 <= head <= n:
                raise ConlluError(f"HEAD {head} references a missing index (sentence has {n} tokens)", path=str(path), line_no=row_line)
            if head == token_id:
                raise ConlluError(f"token {token_id} cannot head itself", path=str(path), line_no=row_line)
            edges.append(DependencyEdge(head, token_id, deprel))
        sentences.append(ParsedSentence(tokens, tuple(edges)))
        rows.clear()

    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                flush()
                continue
            if line.startswith("#"):
                continue
            columns = line.split("\t")
            if len(columns) != _CONLLU_COLUMNS:
                raise ConlluError(f"expected {_CONLLU_COLUMNS} tab-separated columns, got {len(columns)}", path=str(path), line_no=line_no)
            token_id_text = columns[0]
            if "-" in token_id_text or "." in token_id_text:
                continue
            try:
                token_id = int(token_id_text)
            except ValueError:
                raise ConlluError(f"non-integer token id {token_id_text!r}", path=str(path), line_no=line_no) from None
            try:
                head = int(columns[6])
            except ValueError:
                raise ConlluError(f"non-integer HEAD {columns[6]!r}", path=str(path), line_no=line_no) from None
            rows.append((token_id, columns[1], head, columns[7], line_no))
    flush()
    return sentences


def align(sentence: AnnotatedSentence, parse: ParsedSentence, *, case_insensitive: bool = False) -> SentenceGraph:
    """Zip an annotated sentence with its parse into a SentenceGraph."""
    a, b = sentence.tokens, parse.tokens
    if len(a) != len(b):
        position = min(len(a), len(b)) + 1
        raise AlignmentError(
            f"token count mismatch for {sentence.sentence_id!r}: sentence has {len(a)}, parse has {len(b)} "
            f"(first divergence at position {position})"
        )
    for sentence_token, parse_token in zip(a, b):
        left, right = sentence_token.surface, parse_token.surface
        if case_insensitive:
            left, right = left.casefold(), right.casefold()
        if left != right:
            raise AlignmentError(
                f"surface mismatch for {sentence.sentence_id!r} at position {sentence_token.index}: "
                f"{sentence_token.surface!r} != {parse_token.surface!r}"
            )
    return SentenceGraph(sentence.sentence_id, sentence.tokens, parse.edges, sentence.quads)


def align_corpus(
    sentences: Iterable[AnnotatedSentence],
    parses: Iterable[ParsedSentence],
    *,
    case_insensitive: bool = False,
) -> list[SentenceGraph]:
    sentences, parses = list(sentences), list(parses)
    if len(sentences) != len(parses):
        raise AlignmentError(f"corpus size mismatch: {len(sentences)} annotated sentences vs {len(parses)} parses")
    return [align(s, p, case_insensitive=case_insensitive) for s, p in zip(sentences, parses)]


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    quad_count: int
    implicit_aspect_count: int
    implicit_opinion_count: int
    category_histogram: Mapping[str, int] = field(default_factory=dict)
    sentiment_histogram: Mapping[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "sentence_count": self.sentence_count,
            "quad_count": self.quad_count,
            "implicit_aspect_count": self.implicit_aspect_count,
            "implicit_opinion_count": self.implicit_opinion_count,
            "category_histogram": dict(sorted(self.category_histogram.items())),
            "sentiment_histogram": dict(sorted(self.sentiment_histogram.items())),
        }


def corpus_stats(corpus: Iterable[AnnotatedSentence | SentenceGraph]) -> CorpusStats:
    sentence_count = 0
    categories: Counter[str] = Counter()
    sentiments: Counter[str] = Counter()
    implicit_aspects = 0
    implicit_opinions = 0
    for sentence in corpus:
        sentence_count += 1
        for quad in sentence.quads:
            categories[quad.category] += 1
            sentiments[quad.sentiment] += 1
            implicit_aspects += quad.aspect_span is None
            implicit_opinions += quad.opinion_span is None
    return CorpusStats(
        sentence_count=sentence_count,
        quad_count=sum(categories.values()),
        implicit_aspect_count=implicit_aspects,
        implicit_opinion_count=implicit_opinions,
        category_histogram=dict(categories),
        sentiment_histogram=dict(sentiments),
    )


def save_corpus_jsonl(graphs: Iterable[SentenceGraph], path: str | Path) -> int:
    """Write aligned graphs as the canonical one-object-per-line corpus file."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for graph in graphs:
            record = {
                "sentence_id": graph.sentence_id,
                "tokens": [t.surface for t in graph.tokens],
                "edges": [[e.head, e.dependent, e.label] for e in graph.edges],
                "quads": [
                    {
                        "aspect": list(q.aspect_span) if q.aspect_span else None,
                        "opinion": list(q.opinion_span) if q.opinion_span else None,
                        "category": q.category,
                        "sentiment": q.sentiment,
                    }
                    for q in graph.quads
                ],
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    return count


def load_corpus_jsonl(path: str | Path) -> list[SentenceGraph]:
    graphs = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                tokens = tuple(Token(i, s) for i, s in enumerate(record["tokens"], start=1))
                edges = tuple(DependencyEdge(h, d, label) for h, d, label in record["edges"])
                quads = tuple(
                    SentimentQuad(
                        Span(*q["aspect"]) if q["aspect"] else None,
                        Span(*q["opinion"]) if q["opinion"] else None,
                        q["category"],
                        q["sentiment"],
                    )
                    for q in record["quads"]
                )
                graphs.append(SentenceGraph(record["sentence_id"], tokens, edges, quads))
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise AcosError(f"bad corpus record: {exc}", path=str(path), line_no=line_no) from None
    return graphs
