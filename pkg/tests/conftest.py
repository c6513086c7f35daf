"""Shared fixtures: the worked example graph and the stand-in corpora."""

import pytest

from synquad import DependencyEdge, SentenceGraph, SentimentQuad, Span, Token
from synquad.synth import SPLITS, generate_corpus


def build_worked_graph() -> SentenceGraph:
    """The running example used by the golden template tests."""
    words = "service ok but unfriendly , filthy bathroom .".split()
    tokens = tuple(Token(i, w) for i, w in enumerate(words, start=1))
    edges = (
        DependencyEdge(0, 1, "root"),
        DependencyEdge(1, 2, "amod"),
        DependencyEdge(7, 3, "cc"),
        DependencyEdge(7, 4, "amod"),
        DependencyEdge(7, 6, "amod"),
        DependencyEdge(1, 7, "conj"),
    )
    quads = (
        SentimentQuad(Span(1, 1), Span(2, 2), "service general", "negative"),
        SentimentQuad(Span(1, 1), Span(4, 4), "service general", "negative"),
        SentimentQuad(Span(7, 7), Span(6, 6), "ambience general", "negative"),
    )
    return SentenceGraph("demo:1", tokens, edges, quads)


@pytest.fixture
def worked_graph() -> SentenceGraph:
    return build_worked_graph()


@pytest.fixture(scope="session")
def restaurant_corpus() -> list[SentenceGraph]:
    return [g for split in SPLITS for g in generate_corpus("restaurant", split)]


@pytest.fixture(scope="session")
def laptop_corpus() -> list[SentenceGraph]:
    return [g for split in SPLITS for g in generate_corpus("laptop", split)]
