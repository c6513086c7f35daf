"""Annotation parsing, CoNLL-U loading, alignment, and graph validation."""

import pytest

from synquad import (
    AcosError,
    AlignmentError,
    AnnotatedSentence,
    ConlluError,
    DependencyEdge,
    SentenceGraph,
    SentimentQuad,
    Span,
    Token,
    align,
    align_corpus,
    corpus_stats,
    denormalize_category,
    load_acos,
    load_conllu,
    load_corpus_jsonl,
    normalize_category,
    parse_acos_line,
    render_acos_line,
    save_corpus_jsonl,
)

WORKED_LINE = (
    "service ok but unfriendly , filthy bathroom ."
    "\t0,1 SERVICE#GENERAL 0 1,2"
    "\t0,1 SERVICE#GENERAL 0 3,4"
    "\t6,7 AMBIENCE#GENERAL 0 5,6"
)


def test_parse_worked_line():
    sentence = parse_acos_line(WORKED_LINE, sentence_id="demo:1")
    assert sentence.text == "service ok but unfriendly , filthy bathroom ."
    assert len(sentence.quads) == 3
    first, second, third = sentence.quads
    assert first.aspect_span == Span(1, 1)
    assert first.opinion_span == Span(2, 2)
    assert first.category == "service general"
    assert first.sentiment == "negative"
    assert second.opinion_span == Span(4, 4)
    assert third.aspect_span == Span(7, 7)
    assert third.category == "ambience general"


def test_render_inverts_parse():
    sentence = parse_acos_line(WORKED_LINE, sentence_id="demo:1")
    assert render_acos_line(sentence) == WORKED_LINE


def test_parse_implicit_spans():
    sentence = parse_acos_line("not what we expected .\t-1,-1 RESTAURANT#GENERAL 0 -1,-1")
    (quad,) = sentence.quads
    assert quad.aspect_span is None
    assert quad.opinion_span is None
    assert sentence.surface(quad.aspect_span) == "NULL"


def test_parse_zero_quads():
    sentence = parse_acos_line("we arrived around noon .")
    assert sentence.quads == ()


def test_custom_polarity_map():
    line = "food great .\t0,1 FOOD#QUALITY 9 1,2"
    sentence = parse_acos_line(line, polarity_map={9: "positive"})
    assert sentence.quads[0].sentiment == "positive"
    assert render_acos_line(sentence, polarity_map={9: "positive"}) == line


def test_category_set_enforced():
    with pytest.raises(AcosError, match="unknown category"):
        parse_acos_line(WORKED_LINE, category_set={"FOOD#QUALITY"})


@pytest.mark.parametrize(
    "bad_line, message",
    [
        ("food great .\t0,1 FOOD#QUALITY 0", "expected 4 space-separated parts"),
        ("food great .\t0,x FOOD#QUALITY 0 1,2", "malformed span"),
        ("food great .\t0,9 FOOD#QUALITY 0 1,2", "out of range"),
        ("food great .\t1,1 FOOD#QUALITY 0 1,2", "out of range"),
        ("food great .\t0,1 FOOD#QUALITY x 1,2", "non-integer sentiment index"),
        ("food great .\t0,1 FOOD#QUALITY 7 1,2", "sentiment index out of range"),
        ("\t0,1 FOOD#QUALITY 0 1,2", "empty sentence field"),
    ],
)
def test_parse_rejects_malformed_lines(bad_line, message):
    with pytest.raises(AcosError, match=message):
        parse_acos_line(bad_line)


def test_parse_error_carries_location():
    with pytest.raises(AcosError) as excinfo:
        parse_acos_line("food great .\t0,x F 0 1,2", line_no=7, path="corpus.tsv")
    assert "corpus.tsv:7:" in str(excinfo.value)


def test_category_normalization_roundtrip():
    assert normalize_category("FOOD#STYLE_OPTIONS") == "food style_options"
    assert denormalize_category("food style_options") == "FOOD#STYLE_OPTIONS"
    assert denormalize_category(normalize_category("LAPTOP#OPERATION_PERFORMANCE")) == "LAPTOP#OPERATION_PERFORMANCE"


def test_load_acos_assigns_line_ids(tmp_path):
    path = tmp_path / "train.tsv"
    path.write_text(WORKED_LINE + "\n\n" + "fine .\n", encoding="utf-8")
    sentences = load_acos(path)
    assert [s.sentence_id for s in sentences] == ["train:1", "train:3"]


CONLLU_BLOCK = """# sent_id = demo:1
# text = the pizza was great .
1\tthe\t_\t_\t_\t_\t2\tdet\t_\t_
2\tpizza\t_\t_\t_\t_\t4\tnsubj\t_\t_
3\twas\t_\t_\t_\t_\t4\tcop\t_\t_
4\tgreat\t_\t_\t_\t_\t0\troot\t_\t_
5\t.\t_\t_\t_\t_\t4\tpunct\t_\t_
"""


def test_load_conllu_reads_block(tmp_path):
    path = tmp_path / "one.conllu"
    path.write_text(CONLLU_BLOCK, encoding="utf-8")
    (parse,) = load_conllu(path)
    assert [t.surface for t in parse.tokens] == ["the", "pizza", "was", "great", "."]
    assert DependencyEdge(2, 1, "det") in parse.edges
    assert DependencyEdge(0, 4, "root") in parse.edges


def test_load_conllu_skips_ranges_and_comments(tmp_path):
    block = (
        "# a comment\n"
        "1-2\tcannot\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tcan\t_\t_\t_\t_\t0\troot\t_\t_\n"
        "1.1\tnot\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "2\tnot\t_\t_\t_\t_\t1\tadvmod\t_\t_\n"
    )
    path = tmp_path / "mwt.conllu"
    path.write_text(block, encoding="utf-8")
    (parse,) = load_conllu(path)
    assert [t.surface for t in parse.tokens] == ["can", "not"]


def test_load_conllu_multiple_blocks_without_trailing_blank(tmp_path):
    text = CONLLU_BLOCK + "\n" + CONLLU_BLOCK.rstrip("\n")
    path = tmp_path / "two.conllu"
    path.write_text(text, encoding="utf-8")
    assert len(load_conllu(path)) == 2


@pytest.mark.parametrize(
    "mutation, message",
    [
        (lambda b: b.replace("2\tpizza\t_\t_\t_\t_\t4\tnsubj\t_\t_\n", ""), "contiguous"),
        (lambda b: b.replace("4\tgreat\t_\t_\t_\t_\t0\troot", "4\tgreat\t_\t_\t_\t_\t9\troot"), "missing index"),
        (lambda b: b.replace("4\tgreat\t_\t_\t_\t_\t0\troot", "4\tgreat\t_\t_\t_\t_\t4\troot"), "head itself"),
        (lambda b: b.replace("3\twas\t_\t_\t_\t_\t4\tcop\t_\t_", "3\twas\t4\tcop"), "10 tab-separated columns"),
        (lambda b: b.replace("4\tgreat\t_\t_\t_\t_\t0\troot", "4\tgreat\t_\t_\t_\t_\tx\troot"), "non-integer HEAD"),
    ],
)
def test_load_conllu_rejects_malformed(tmp_path, mutation, message):
    path = tmp_path / "bad.conllu"
    path.write_text(mutation(CONLLU_BLOCK), encoding="utf-8")
    with pytest.raises(ConlluError, match=message):
        load_conllu(path)


def test_conllu_error_names_line(tmp_path):
    path = tmp_path / "bad.conllu"
    path.write_text(CONLLU_BLOCK.replace("3\twas\t_\t_\t_\t_\t4\tcop\t_\t_", "3\twas\t4\tcop"), encoding="utf-8")
    with pytest.raises(ConlluError, match=r"bad\.conllu:5:"):
        load_conllu(path)


def _annotated(text: str) -> AnnotatedSentence:
    return parse_acos_line(text, sentence_id="t:1")


def test_align_joins_tokens_and_edges(tmp_path):
    path = tmp_path / "p.conllu"
    path.write_text(CONLLU_BLOCK, encoding="utf-8")
    (parse,) = load_conllu(path)
    graph = align(_annotated("the pizza was great .\t1,2 FOOD#QUALITY 2 3,4"), parse)
    assert isinstance(graph, SentenceGraph)
    assert graph.quads[0].category == "food quality"
    assert graph.edges == parse.edges


def test_align_count_mismatch_names_position():
    sentence = _annotated("the pizza was great .")
    parse_tokens = tuple(Token(i, w) for i, w in enumerate(["the", "pizza", "was", "great"], 1))
    from synquad import ParsedSentence

    with pytest.raises(AlignmentError, match="first divergence at position 5"):
        align(sentence, ParsedSentence(parse_tokens, ()))


def test_align_surface_mismatch_names_position():
    from synquad import ParsedSentence

    sentence = _annotated("the pizza was great .")
    parse_tokens = tuple(Token(i, w) for i, w in enumerate(["the", "Pizza", "was", "great", "."], 1))
    parse = ParsedSentence(parse_tokens, ())
    with pytest.raises(AlignmentError, match="position 2"):
        align(sentence, parse)
    relaxed = align(sentence, parse, case_insensitive=True)
    assert relaxed.text == "the pizza was great ."


def test_align_corpus_size_mismatch():
    with pytest.raises(AlignmentError, match="size mismatch"):
        align_corpus([_annotated("a b")], [])


def test_graph_rejects_second_head():
    tokens = (Token(1, "a"), Token(2, "b"))
    edges = (DependencyEdge(0, 1, "root"), DependencyEdge(1, 2, "dep"), DependencyEdge(2, 1, "dep"))
    with pytest.raises(ValueError, match="more than one head"):
        SentenceGraph("x", tokens, edges)


def test_graph_allows_unattached_tokens(worked_graph):
    attached = {e.dependent for e in worked_graph.edges}
    assert attached == {1, 2, 3, 4, 6, 7}


@pytest.mark.parametrize(
    "edge, message",
    [
        (DependencyEdge(3, 3, "dep"), "head itself"),
        (DependencyEdge(9, 1, "dep"), "head 9 out of range"),
        (DependencyEdge(1, 9, "dep"), "dependent 9 out of range"),
    ],
)
def test_graph_rejects_bad_edges(edge, message):
    tokens = (Token(1, "a"), Token(2, "b"), Token(3, "c"))
    with pytest.raises(ValueError, match=message):
        SentenceGraph("x", tokens, (edge,))


def test_adjacency_symmetric_and_rootless(worked_graph):
    matrix = worked_graph.adjacency
    n = len(worked_graph.tokens)
    for i in range(n + 1):
        for j in range(n + 1):
            assert matrix[i][j] == matrix[j][i]
    assert not any(matrix[0])
    assert matrix[1][2] and matrix[2][1]


def test_neighbor_map_sorted(worked_graph):
    assert worked_graph.neighbor_map[7] == (1, 3, 4, 6)
    assert 5 not in worked_graph.neighbor_map
    assert 8 not in worked_graph.neighbor_map


def test_quad_validation():
    with pytest.raises(ValueError, match="sentiment"):
        SentimentQuad(None, None, "food quality", "meh")
    with pytest.raises(ValueError, match="not a valid"):
        SentimentQuad(Span(3, 2), None, "food quality", "positive")


def test_corpus_stats_counts():
    sentences = [
        _annotated(WORKED_LINE),
        _annotated("not what we expected .\t-1,-1 RESTAURANT#GENERAL 0 -1,-1"),
        _annotated("we arrived around noon ."),
    ]
    stats = corpus_stats(sentences)
    assert stats.sentence_count == 3
    assert stats.quad_count == 4
    assert stats.implicit_aspect_count == 1
    assert stats.implicit_opinion_count == 1
    assert stats.category_histogram["service general"] == 2
    assert stats.sentiment_histogram["negative"] == 4
    assert stats.to_dict()["quad_count"] == 4


def test_corpus_jsonl_roundtrip(tmp_path, worked_graph):
    path = tmp_path / "corpus.jsonl"
    assert save_corpus_jsonl([worked_graph], path) == 1
    (loaded,) = load_corpus_jsonl(path)
    assert loaded == worked_graph


def test_load_corpus_jsonl_rejects_bad_record(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text('{"sentence_id": "x", "tokens": ["a"], "edges": []}\n', encoding="utf-8")
    with pytest.raises(AcosError, match="bad corpus record"):
        load_corpus_jsonl(path)
