"""Corpus-to-instruction-dataset toolkit for syntax-aware sentiment quad
prediction.

The package turns span-annotated review corpora plus dependency parses into
instruction-tuning datasets for a two-step quad prediction recipe (extract
aspect-opinion pairs, then classify category and sentiment), decodes raw
model outputs back into structured predictions, and scores them.
"""

from .baseline import (
    BasePredictor,
    GoldReplayPredictor,
    HeuristicPredictor,
    SubprocessPredictor,
    heuristic_extract,
    serve_requests,
)
from .config import (
    DEFAULT_EMPTY_LITERAL,
    DEFAULT_END_MARKER,
    DEFAULT_SEPARATOR,
    NEIGHBOR_ORDERS,
    ORDER_COMMON_LAST,
    ORDER_POSITION,
    STYLE_NL,
    STYLE_NONE,
    STYLE_SYMBOL,
    STYLES,
    PromptConfig,
    load_prompt_config,
)
from .corpus import (
    NEGATIVE,
    NEUTRAL,
    NULL_LITERAL,
    POSITIVE,
    SENTIMENTS,
    AnnotatedSentence,
    CorpusStats,
    DependencyEdge,
    ParsedSentence,
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
from .decode import (
    PairPrediction,
    QuadPrediction,
    decode_pairs,
    decode_quads,
    merge_bidirectional,
    normalize,
    parse_records,
)
from .errors import AcosError, AlignmentError, ConlluError, DataError, ProtocolError, SynquadError
from .pipeline import PipelineConfig, RunResult, Stage2Result, run_stage2_isolated, run_two_stage
from .promptgen import (
    ALL_TASKS,
    AUX_TASKS,
    STEP1_TASKS,
    STEP2_TASKS,
    TASK_SETS,
    InstructionExample,
    TaskKind,
    build_dataset,
    emit_jsonl,
    gen_classification,
    gen_extraction,
    gen_link,
    gen_node_classification,
    generate,
    locate_term,
    subgraph_for,
)
from .scoring import (
    EvalReport,
    MatchCounts,
    element_accuracy,
    match_items,
    match_quads,
    micro_scores,
    pair_scores,
)
from .synth import (
    DOMAIN_DIRS,
    DOMAINS,
    SPLIT_SIZES,
    SPLITS,
    generate_corpus,
    generate_domain,
    generate_sentence,
    render_conllu,
    write_corpus,
)
from .syntax import neighbors, relation_word, render_order, serialize_global, serialize_subgraph

__version__ = "0.1.0"

__all__ = [
    "AcosError",
    "AlignmentError",
    "AnnotatedSentence",
    "ALL_TASKS",
    "AUX_TASKS",
    "BasePredictor",
    "ConlluError",
    "CorpusStats",
    "DataError",
    "DEFAULT_EMPTY_LITERAL",
    "DEFAULT_END_MARKER",
    "DEFAULT_SEPARATOR",
    "DOMAIN_DIRS",
    "DOMAINS",
    "DependencyEdge",
    "EvalReport",
    "GoldReplayPredictor",
    "HeuristicPredictor",
    "InstructionExample",
    "MatchCounts",
    "NEGATIVE",
    "NEIGHBOR_ORDERS",
    "NEUTRAL",
    "NULL_LITERAL",
    "ORDER_COMMON_LAST",
    "ORDER_POSITION",
    "PairPrediction",
    "ParsedSentence",
    "PipelineConfig",
    "POSITIVE",
    "PromptConfig",
    "ProtocolError",
    "QuadPrediction",
    "RunResult",
    "SENTIMENTS",
    "SPLIT_SIZES",
    "SPLITS",
    "STEP1_TASKS",
    "STEP2_TASKS",
    "STYLE_NL",
    "STYLE_NONE",
    "STYLE_SYMBOL",
    "STYLES",
    "SentenceGraph",
    "SentimentQuad",
    "Span",
    "Stage2Result",
    "SubprocessPredictor",
    "SynquadError",
    "TASK_SETS",
    "TaskKind",
    "Token",
    "align",
    "align_corpus",
    "build_dataset",
    "corpus_stats",
    "decode_pairs",
    "decode_quads",
    "denormalize_category",
    "element_accuracy",
    "emit_jsonl",
    "gen_classification",
    "gen_extraction",
    "gen_link",
    "gen_node_classification",
    "generate",
    "generate_corpus",
    "generate_domain",
    "generate_sentence",
    "heuristic_extract",
    "load_acos",
    "load_conllu",
    "load_corpus_jsonl",
    "load_prompt_config",
    "locate_term",
    "match_items",
    "match_quads",
    "merge_bidirectional",
    "micro_scores",
    "neighbors",
    "normalize",
    "normalize_category",
    "pair_scores",
    "parse_acos_line",
    "parse_records",
    "relation_word",
    "render_acos_line",
    "render_conllu",
    "render_order",
    "run_stage2_isolated",
    "run_two_stage",
    "save_corpus_jsonl",
    "serialize_global",
    "serialize_subgraph",
    "serve_requests",
    "subgraph_for",
    "write_corpus",
    "__version__",
]
