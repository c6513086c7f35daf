"""Dependency-graph serialization: clause lists, bracketed trees, k-hop subgraphs.

The natural-language style renders one clause per edge ("<head> <word>
<dependent>", "root depend <surface>" for the root edge) joined by " | " in
dependent-position order. The symbol style renders the classic bracketed
tree. Subgraph descriptions verbalize a span's k-hop neighborhood.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .config import (
    ORDER_COMMON_LAST,
    ORDER_POSITION,
    STYLE_NL,
    STYLE_SYMBOL,
    default_common_word_ranks,
    default_relation_words,
)
from .corpus import NULL_LITERAL, SentenceGraph, Span, Token

MODIFY = "modify"
DEPEND = "depend"

NO_NEIGHBOR_TEMPLATE = "{role}: {surface}, which has no syntactic neighbors."
CONNECTED_TEMPLATE = "{role}: {surface}, which is connected to ({names}) {hop_phrase}"


def relation_word(label: str, table: Mapping[str, str] | None = None) -> str:
    """Collapse a dependency label to its clause word; subtypes fall back to the base label."""
    if table is None:
        table = default_relation_words()
    if label in table:
        return table[label]
    base = label.split(":", 1)[0]
    return table.get(base, DEPEND)


def _nl_clauses(graph: SentenceGraph, table: Mapping[str, str] | None) -> list[str]:
    clauses = []
    for edge in sorted(graph.edges, key=lambda e: e.dependent):
        dependent = graph.tokens[edge.dependent - 1].surface
        if edge.head == 0:
            clauses.append(f"root depend {dependent}")
        else:
            head = graph.tokens[edge.head - 1].surface
            clauses.append(f"{head} {relation_word(edge.label, table)} {dependent}")
    return clauses


def _bracketed(graph: SentenceGraph) -> str:
    children: dict[int, list[int]] = {}
    roots: list[int] = []
    for edge in sorted(graph.edges, key=lambda e: e.dependent):
        if edge.head == 0:
            roots.append(edge.dependent)
        else:
            children.setdefault(edge.head, []).append(edge.dependent)

    def render(root: int) -> str:
        # Iterative to keep deep chains from hitting the recursion limit.
        out: list[str] = []
        stack: list[tuple[str, object]] = [("open", root)]
        while stack:
            kind, value = stack.pop()
            if kind == "text":
                out.append(value)  # type: ignore[arg-type]
                continue
            index = value  # type: ignore[assignment]
            out.append(f"({graph.tokens[index - 1].surface}")
            stack.append(("text", ")"))
            for child in reversed(children.get(index, [])):
                stack.append(("open", child))
                stack.append(("text", " "))
        return "".join(out)

    return " ".join(render(r) for r in roots)


def serialize_global(
    graph: SentenceGraph,
    style: str = STYLE_NL,
    relation_words: Mapping[str, str] | None = None,
) -> str:
    """Render the whole dependency structure in the requested style."""
    if style == STYLE_NL:
        return " | ".join(_nl_clauses(graph, relation_words))
    if style == STYLE_SYMBOL:
        return _bracketed(graph)
    raise ValueError(f"unknown serialization style {style!r}")


def neighbors(graph: SentenceGraph, span: Span | None, hops: int = 1) -> list[Token]:
    """Tokens reachable from the span in <= hops adjacency steps, span excluded,
    in sentence-position order. Implicit spans have no neighbors.
    """
    if hops < 1:
        raise ValueError(f"hops must be >= 1, got {hops}")
    if span is None:
        return []
    if not 1 <= span.begin <= span.end <= len(graph.tokens):
        raise ValueError(f"span {span} out of range for {len(graph.tokens)} tokens")
    own = set(range(span.begin, span.end + 1))
    seen = set(own)
    frontier = own
    for _ in range(hops):
        frontier = {j for i in frontier for j in graph.neighbor_map.get(i, ()) if j not in seen}
        if not frontier:
            break
        seen |= frontier
    return [graph.tokens[i - 1] for i in sorted(seen - own)]


def render_order(
    tokens: Iterable[Token],
    policy: str = ORDER_COMMON_LAST,
    ranks: Mapping[str, int] | None = None,
) -> list[Token]:
    """Order tokens for display inside a neighbor list.

    common_last leads with words absent from the rank table (by position) and
    trails with listed words, least common first; position is plain sentence
    order.
    """
    if policy == ORDER_POSITION:
        return sorted(tokens, key=lambda t: t.index)
    if policy == ORDER_COMMON_LAST:
        table = ranks if ranks is not None else default_common_word_ranks()

        def key(token: Token):
            rank = table.get(token.surface.lower())
            if rank is None:
                return (0, token.index, 0)
            return (1, -rank, token.index)

        return sorted(tokens, key=key)
    raise ValueError(f"unknown neighbor order policy {policy!r}")


def _hop_phrase(hops: int) -> str:
    return "within one hop." if hops == 1 else f"within {hops} hops."


def serialize_subgraph(
    graph: SentenceGraph,
    role: str,
    span: Span | None,
    hops: int = 1,
    *,
    order: str = ORDER_COMMON_LAST,
    ranks: Mapping[str, int] | None = None,
) -> str:
    """One-sentence description of a span's k-hop neighborhood."""
    if span is None:
        return NO_NEIGHBOR_TEMPLATE.format(role=role, surface=NULL_LITERAL)
    connected = render_order(neighbors(graph, span, hops), order, ranks)
    names = ", ".join(t.surface for t in connected)
    return CONNECTED_TEMPLATE.format(
        role=role,
        surface=graph.surface(span),
        names=names,
        hop_phrase=_hop_phrase(hops),
    )
