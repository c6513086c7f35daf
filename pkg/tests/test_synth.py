"""Bundled stand-in corpora: sizes, determinism, and structural guarantees."""

import pytest

from synquad import (
    DOMAINS,
    SPLIT_SIZES,
    SPLITS,
    align_corpus,
    denormalize_category,
    generate_corpus,
    load_acos,
    load_conllu,
    normalize_category,
    write_corpus,
)
from synquad.pipeline import gold_quad_keys


@pytest.mark.parametrize("domain", DOMAINS)
def test_split_sizes(domain):
    for split in SPLITS:
        assert len(generate_corpus(domain, split)) == SPLIT_SIZES[domain][split]


def test_domain_totals():
    assert sum(SPLIT_SIZES["restaurant"].values()) == 2286
    assert sum(SPLIT_SIZES["laptop"].values()) == 4076


def test_generation_is_deterministic():
    first = generate_corpus("restaurant", "dev")
    second = generate_corpus("restaurant", "dev")
    assert first == second


def test_domains_differ():
    assert generate_corpus("restaurant", "dev")[0].text != generate_corpus("laptop", "dev")[0].text


def _all_graphs(corpus):
    return corpus


def test_quad_keys_unique_per_sentence(restaurant_corpus, laptop_corpus):
    for graph in [*restaurant_corpus, *laptop_corpus]:
        keys = gold_quad_keys(graph)
        assert len(keys) == len(set(keys)), graph.sentence_id


def test_no_reserved_null_token(restaurant_corpus, laptop_corpus):
    for graph in [*restaurant_corpus, *laptop_corpus]:
        for token in graph.tokens:
            assert token.surface.lower() != "null", graph.sentence_id


def test_every_sentence_is_single_rooted_tree(restaurant_corpus, laptop_corpus):
    for graph in [*restaurant_corpus, *laptop_corpus]:
        heads = {}
        roots = 0
        for edge in graph.edges:
            assert edge.dependent not in heads, graph.sentence_id
            heads[edge.dependent] = edge.head
            if edge.head == 0:
                roots += 1
        assert roots == 1, graph.sentence_id
        assert set(heads) == {t.index for t in graph.tokens}, graph.sentence_id


def test_categories_roundtrip_tsv_format(restaurant_corpus, laptop_corpus):
    for graph in [*restaurant_corpus, *laptop_corpus]:
        for quad in graph.quads:
            assert normalize_category(denormalize_category(quad.category)) == quad.category


def test_written_files_load_back_identically(tmp_path):
    write_corpus("restaurant", tmp_path)
    for split in SPLITS:
        annotations = load_acos(tmp_path / f"{split}.tsv")
        parses = load_conllu(tmp_path / f"{split}.conllu")
        loaded = align_corpus(annotations, parses)
        assert loaded == generate_corpus("restaurant", split)
