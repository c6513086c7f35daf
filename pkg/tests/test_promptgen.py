"""Instruction example generation for all nine task kinds."""

import json

import pytest

from synquad import (
    ALL_TASKS,
    AUX_TASKS,
    DEFAULT_END_MARKER,
    STEP1_TASKS,
    STEP2_TASKS,
    DependencyEdge,
    PromptConfig,
    SentenceGraph,
    Span,
    TaskKind,
    Token,
    build_dataset,
    emit_jsonl,
    gen_classification,
    generate,
    locate_term,
    subgraph_for,
)

from goldens import GOLDENS


def test_task_inventory_complete():
    assert [t.value for t in ALL_TASKS] == [
        "extract_ao",
        "extract_oa",
        "link_a_to_o",
        "link_o_to_a",
        "classify_pair",
        "classify_a_to_c",
        "classify_a_to_s",
        "classify_o_to_c",
        "classify_o_to_s",
    ]
    assert set(ALL_TASKS) == set(STEP1_TASKS) | set(STEP2_TASKS) | set(AUX_TASKS)
    assert len(ALL_TASKS) == 9


@pytest.mark.parametrize("task", ALL_TASKS, ids=[t.value for t in ALL_TASKS])
def test_generate_matches_golden(worked_graph, task):
    golden = GOLDENS[task.value]
    example = generate(worked_graph, task, PromptConfig())
    assert example.instruction == golden["instruction"]
    assert example.input == golden["input"]
    assert example.output == golden["output"]
    assert example.sentence_id == "demo:1"


def test_shared_instruction_typo_preserved():
    # The sentiment-from-opinion instruction reuses the category wording.
    assert GOLDENS["classify_o_to_s"]["instruction"] == GOLDENS["classify_o_to_c"]["instruction"]


def test_record_appends_end_marker(worked_graph):
    example = generate(worked_graph, TaskKind.EXTRACT_AO, PromptConfig())
    record = example.to_record(end_marker=DEFAULT_END_MARKER)
    assert record["output"] == GOLDENS["extract_ao"]["output"] + "<|end_of_sentence|>"
    assert record["task"] == "extract_ao"


def test_inference_mode_has_empty_output(worked_graph):
    example = generate(worked_graph, TaskKind.EXTRACT_AO, PromptConfig(), training=False)
    assert example.output == ""
    assert example.input == GOLDENS["extract_ao"]["input"]


def test_style_none_strips_syntax_lines(worked_graph):
    config = PromptConfig(style="none")
    extraction = generate(worked_graph, TaskKind.EXTRACT_AO, config)
    assert extraction.input == f"sentence: {worked_graph.text}"
    classification = generate(worked_graph, TaskKind.CLASSIFY_PAIR, config)
    assert "subgraph:" not in classification.input
    assert classification.input.splitlines()[0] == f"sentence: {worked_graph.text}"
    assert classification.output == GOLDENS["classify_pair"]["output"]


def test_style_symbol_swaps_global_block(worked_graph):
    config = PromptConfig(style="symbol")
    example = generate(worked_graph, TaskKind.EXTRACT_AO, config)
    assert "dependency relation: (service (ok) (bathroom (but) (unfriendly) (filthy)))" in example.input
    assert example.output == GOLDENS["extract_ao"]["output"]


def test_classification_inference_requires_pairs(worked_graph):
    with pytest.raises(ValueError, match="requires explicit pairs"):
        gen_classification(worked_graph, PromptConfig(), training=False)


def test_classification_with_term_refs(worked_graph):
    example = gen_classification(
        worked_graph,
        PromptConfig(),
        pairs=[("service", "ok"), ("NULL", "unfriendly")],
        training=False,
    )
    assert "candidate: aspect: service, opinion: ok | aspect: NULL, opinion: unfriendly" in example.input
    assert "aspect: NULL, which has no syntactic neighbors." in example.input
    assert example.output == ""


def test_classification_with_unanchorable_term(worked_graph):
    example = gen_classification(
        worked_graph,
        PromptConfig(),
        pairs=[("wifi", "ok")],
        training=False,
    )
    assert "aspect: wifi, which has no syntactic neighbors." in example.input


def test_subgraph_for_string_and_span_agree(worked_graph):
    config = PromptConfig()
    by_span = subgraph_for(worked_graph, "aspect", Span(1, 1), config)
    by_term = subgraph_for(worked_graph, "aspect", "service", config)
    assert by_span == by_term


def test_locate_term(worked_graph):
    assert locate_term(worked_graph, "Service") == Span(1, 1)
    assert locate_term(worked_graph, "filthy bathroom") == Span(6, 7)
    assert locate_term(worked_graph, "pizza") is None
    assert locate_term(worked_graph, "") is None


def _zero_quad_graph() -> SentenceGraph:
    tokens = tuple(Token(i, w) for i, w in enumerate("we arrived around noon .".split(), 1))
    edges = (
        DependencyEdge(2, 1, "nsubj"),
        DependencyEdge(0, 2, "root"),
        DependencyEdge(4, 3, "case"),
        DependencyEdge(2, 4, "obl"),
        DependencyEdge(2, 5, "punct"),
    )
    return SentenceGraph("z:1", tokens, edges)


def test_zero_quad_sentence_uses_empty_literal():
    graph = _zero_quad_graph()
    config = PromptConfig()
    extraction = generate(graph, TaskKind.EXTRACT_AO, config)
    assert extraction.output == "none"
    classification = generate(graph, TaskKind.CLASSIFY_PAIR, config)
    assert "subgraph: none" in classification.input
    assert "candidate: none" in classification.input
    assert classification.output == "none"
    node = generate(graph, TaskKind.CLASSIFY_A_TO_C, config)
    assert "candidate aspect: none" in node.input


def test_implicit_elements_render_null():
    tokens = tuple(Token(i, w) for i, w in enumerate("not what we expected .".split(), 1))
    edges = (
        DependencyEdge(4, 1, "advmod"),
        DependencyEdge(4, 2, "obj"),
        DependencyEdge(4, 3, "nsubj"),
        DependencyEdge(0, 4, "root"),
        DependencyEdge(4, 5, "punct"),
    )
    from synquad import SentimentQuad

    graph = SentenceGraph(
        "i:1", tokens, edges, (SentimentQuad(None, None, "restaurant general", "negative"),)
    )
    example = generate(graph, TaskKind.EXTRACT_AO, PromptConfig())
    assert example.output == "aspect: NULL, opinion: NULL"
    classification = generate(graph, TaskKind.CLASSIFY_PAIR, PromptConfig())
    assert "aspect: NULL, which has no syntactic neighbors." in classification.input
    assert "opinion: NULL, which has no syntactic neighbors." in classification.input


def test_custom_separator_and_empty_literal(worked_graph):
    config = PromptConfig(separator=" ;; ", empty_literal="EMPTY")
    example = generate(worked_graph, TaskKind.EXTRACT_AO, config)
    assert " ;; " in example.output
    assert " | " not in example.output
    empty = generate(_zero_quad_graph(), TaskKind.EXTRACT_AO, config)
    assert empty.output == "EMPTY"


def test_build_dataset_preserves_order(worked_graph):
    graphs = [worked_graph, _zero_quad_graph()]
    examples = build_dataset(graphs, TaskKind.EXTRACT_AO, PromptConfig())
    assert [e.sentence_id for e in examples] == ["demo:1", "z:1"]


def test_emit_jsonl_modes(tmp_path, worked_graph):
    examples = build_dataset([worked_graph], TaskKind.EXTRACT_AO, PromptConfig())
    train_path = tmp_path / "train.jsonl"
    infer_path = tmp_path / "infer.jsonl"
    assert emit_jsonl(examples, train_path) == 1
    assert emit_jsonl(examples, infer_path, training_mode=False) == 1
    train_record = json.loads(train_path.read_text(encoding="utf-8"))
    infer_record = json.loads(infer_path.read_text(encoding="utf-8"))
    assert train_record["output"].endswith("<|end_of_sentence|>")
    assert not infer_record["output"].endswith("<|end_of_sentence|>")
    assert train_record["input"] == infer_record["input"]
    assert set(train_record) == {"task", "instruction", "input", "output", "sentence_id"}


def test_emit_jsonl_custom_marker(tmp_path, worked_graph):
    examples = build_dataset([worked_graph], TaskKind.EXTRACT_AO, PromptConfig())
    path = tmp_path / "custom.jsonl"
    emit_jsonl(examples, path, end_marker="<END>")
    record = json.loads(path.read_text(encoding="utf-8"))
    assert record["output"].endswith("<END>")
