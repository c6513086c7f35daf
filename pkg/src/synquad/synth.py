"""Deterministic stand-in corpora shaped like span-annotated review data.

Real annotation releases cannot ship with this repository, so these
generators produce two domains of synthetic sentences with the same file
formats, split sizes, and structural properties (explicit and implicit
elements, multi-quad sentences, zero-quad sentences, full single-head
dependency trees). Everything is seeded per domain and split, so the same
corpus is regenerated byte for byte on every machine.
"""

from __future__ import annotations

import random
from pathlib import Path

from .corpus import (
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    DependencyEdge,
    SentenceGraph,
    SentimentQuad,
    Span,
    Token,
    render_acos_line,
)

SPLITS = ("train", "dev", "test")
SPLIT_SIZES = {
    "restaurant": {"train": 1530, "dev": 171, "test": 585},
    "laptop": {"train": 2934, "dev": 326, "test": 816},
}
DOMAINS = tuple(SPLIT_SIZES)

# Directory names used when corpora are materialized on disk, matching the
# layout expected from real annotation releases.
DOMAIN_DIRS = {"restaurant": "Restaurant-ACOS", "laptop": "Laptop-ACOS"}

_GENERAL_CATEGORY = {"restaurant": "restaurant general", "laptop": "laptop general"}

_ASPECTS = {
    "restaurant": {
        "restaurant general": ("place", "restaurant", "spot"),
        "restaurant prices": ("prices", "bill", "check"),
        "restaurant miscellaneous": ("parking", "bathroom", "coat check"),
        "food quality": ("pizza", "sushi", "pasta", "burger", "salad", "steak", "noodles", "dessert"),
        "food prices": ("pizza", "sushi", "lunch special", "steak"),
        "food style_options": ("menu", "portions", "selection"),
        "drinks quality": ("wine", "coffee", "beer", "tea", "cocktails"),
        "drinks prices": ("wine", "beer", "cocktails"),
        "drinks style_options": ("wine list", "drink menu"),
        "ambience general": ("ambience", "decor", "atmosphere", "music", "lighting"),
        "service general": ("service", "staff", "waiter", "server", "hostess"),
        "location general": ("location", "neighborhood", "view"),
    },
    "laptop": {
        "laptop general": ("laptop", "machine", "computer"),
        "laptop operation_performance": ("laptop", "machine"),
        "laptop design_features": ("design", "build", "chassis"),
        "laptop usability": ("setup", "touchpad"),
        "laptop portability": ("laptop", "machine"),
        "laptop price": ("price", "cost"),
        "laptop quality": ("build quality", "machine"),
        "battery general": ("battery",),
        "battery operation_performance": ("battery", "battery life"),
        "battery quality": ("battery",),
        "keyboard general": ("keyboard", "keys"),
        "keyboard design_features": ("keyboard", "keys", "backlight"),
        "keyboard usability": ("keyboard", "trackpad"),
        "screen general": ("screen", "display"),
        "screen quality": ("screen", "display", "panel"),
        "screen design_features": ("screen", "bezel"),
        "cpu operation_performance": ("processor", "cpu"),
        "memory general": ("memory", "ram"),
        "memory operation_performance": ("ram",),
        "hard_disc general": ("hard drive", "ssd"),
        "hard_disc operation_performance": ("ssd", "drive"),
        "os general": ("os", "software"),
        "os operation_performance": ("os",),
        "os usability": ("os", "interface"),
        "graphics general": ("graphics", "graphics card"),
        "graphics operation_performance": ("graphics card", "gpu"),
        "ports general": ("ports", "usb ports"),
        "ports connectivity": ("ports", "wifi"),
        "support general": ("support", "customer service"),
        "support quality": ("support", "warranty service"),
        "company general": ("brand", "company"),
        "fans_cooling operation_performance": ("fan", "fans", "cooling"),
        "power_supply general": ("charger", "power cord"),
        "shipping general": ("shipping", "packaging"),
    },
}

_OPINIONS = {
    "restaurant": {
        POSITIVE: ("great", "amazing", "excellent", "fresh", "friendly", "tasty", "lovely", "cozy", "perfect"),
        NEGATIVE: ("terrible", "awful", "bland", "rude", "greasy", "overpriced", "stale", "noisy", "dirty", "slow"),
        NEUTRAL: ("average", "ordinary", "typical", "standard", "fine"),
    },
    "laptop": {
        POSITIVE: ("fast", "sturdy", "bright", "responsive", "quiet", "reliable", "crisp", "smooth", "light"),
        NEGATIVE: ("slow", "flimsy", "dim", "laggy", "loud", "unreliable", "blurry", "clunky", "heavy", "hot"),
        NEUTRAL: ("adequate", "acceptable", "standard", "average"),
    },
}

_SENTIMENT_CHOICES = (POSITIVE, NEGATIVE, NEUTRAL)
_SENTIMENT_WEIGHTS = (50, 35, 15)

_PATTERNS = (
    "copular",
    "conj_two",
    "multi_opinion",
    "implicit_aspect",
    "implicit_opinion",
    "both_implicit",
    "zero_quad",
)
_PATTERN_WEIGHTS = (30, 14, 14, 12, 12, 8, 10)


def _pick_sentiment(rng: random.Random) -> str:
    return rng.choices(_SENTIMENT_CHOICES, weights=_SENTIMENT_WEIGHTS, k=1)[0]


def _pick_aspect(rng: random.Random, domain: str) -> tuple[str, list[str]]:
    categories = sorted(_ASPECTS[domain])
    category = rng.choice(categories)
    return category, rng.choice(_ASPECTS[domain][category]).split()


def _compounds(begin: int, end: int) -> list[DependencyEdge]:
    """Attach every non-final word of a phrase to the final (head) word."""
    return [DependencyEdge(end, i, "compound") for i in range(begin, end)]


def _copular(rng: random.Random, domain: str):
    category, aspect = _pick_aspect(rng, domain)
    sentiment = _pick_sentiment(rng)
    opinion = rng.choice(_OPINIONS[domain][sentiment])
    cop = rng.choice(("was", "is"))
    words = ["the", *aspect, cop, opinion, "."]
    a_end = 1 + len(aspect)
    cop_i, o_i, dot = a_end + 1, a_end + 2, a_end + 3
    edges = [DependencyEdge(a_end, 1, "det"), *_compounds(2, a_end)]
    edges += [
        DependencyEdge(o_i, a_end, "nsubj"),
        DependencyEdge(o_i, cop_i, "cop"),
        DependencyEdge(0, o_i, "root"),
        DependencyEdge(o_i, dot, "punct"),
    ]
    quads = [SentimentQuad(Span(2, a_end), Span(o_i, o_i), category, sentiment)]
    return words, edges, quads


def _conj_two(rng: random.Random, domain: str):
    category1, aspect1 = _pick_aspect(rng, domain)
    while True:
        category2, aspect2 = _pick_aspect(rng, domain)
        if aspect2 != aspect1:
            break
    sentiment1, sentiment2 = _pick_sentiment(rng), _pick_sentiment(rng)
    opinion1 = rng.choice(_OPINIONS[domain][sentiment1])
    opinion2 = rng.choice(_OPINIONS[domain][sentiment2])
    words = ["the", *aspect1, "was", opinion1, "but", "the", *aspect2, "was", opinion2, "."]
    e1 = 1 + len(aspect1)
    was1, o1, but, the2 = e1 + 1, e1 + 2, e1 + 3, e1 + 4
    b2 = the2 + 1
    e2 = the2 + len(aspect2)
    was2, o2, dot = e2 + 1, e2 + 2, e2 + 3
    edges = [DependencyEdge(e1, 1, "det"), *_compounds(2, e1)]
    edges += [
        DependencyEdge(o1, e1, "nsubj"),
        DependencyEdge(o1, was1, "cop"),
        DependencyEdge(0, o1, "root"),
        DependencyEdge(o2, but, "cc"),
        DependencyEdge(e2, the2, "det"),
        *_compounds(b2, e2),
        DependencyEdge(o2, e2, "nsubj"),
        DependencyEdge(o2, was2, "cop"),
        DependencyEdge(o1, o2, "conj"),
        DependencyEdge(o1, dot, "punct"),
    ]
    quads = [
        SentimentQuad(Span(2, e1), Span(o1, o1), category1, sentiment1),
        SentimentQuad(Span(b2, e2), Span(o2, o2), category2, sentiment2),
    ]
    return words, edges, quads


def _multi_opinion(rng: random.Random, domain: str):
    category, aspect = _pick_aspect(rng, domain)
    sentiment1, sentiment2 = _pick_sentiment(rng), _pick_sentiment(rng)
    opinion1 = rng.choice(_OPINIONS[domain][sentiment1])
    while True:
        opinion2 = rng.choice(_OPINIONS[domain][sentiment2])
        if opinion2 != opinion1:
            break
    words = ["the", *aspect, "was", opinion1, "and", opinion2, "."]
    a_end = 1 + len(aspect)
    was, o1, cc, o2, dot = a_end + 1, a_end + 2, a_end + 3, a_end + 4, a_end + 5
    edges = [DependencyEdge(a_end, 1, "det"), *_compounds(2, a_end)]
    edges += [
        DependencyEdge(o1, a_end, "nsubj"),
        DependencyEdge(o1, was, "cop"),
        DependencyEdge(0, o1, "root"),
        DependencyEdge(o2, cc, "cc"),
        DependencyEdge(o1, o2, "conj"),
        DependencyEdge(o1, dot, "punct"),
    ]
    quads = [
        SentimentQuad(Span(2, a_end), Span(o1, o1), category, sentiment1),
        SentimentQuad(Span(2, a_end), Span(o2, o2), category, sentiment2),
    ]
    return words, edges, quads


def _implicit_aspect(rng: random.Random, domain: str):
    sentiment = _pick_sentiment(rng)
    opinion = rng.choice(_OPINIONS[domain][sentiment])
    adverb = rng.choice(("overall", "though", "honestly"))
    words = ["it", "was", opinion, adverb, "."]
    edges = [
        DependencyEdge(3, 1, "nsubj"),
        DependencyEdge(3, 2, "cop"),
        DependencyEdge(0, 3, "root"),
        DependencyEdge(3, 4, "advmod"),
        DependencyEdge(3, 5, "punct"),
    ]
    quads = [SentimentQuad(None, Span(3, 3), _GENERAL_CATEGORY[domain], sentiment)]
    return words, edges, quads


def _implicit_opinion(rng: random.Random, domain: str):
    category, aspect = _pick_aspect(rng, domain)
    a_len = len(aspect)
    kind, sentiment = rng.choice((("forgot", NEGATIVE), ("order", POSITIVE), ("neutral", NEUTRAL)))
    if kind == "forgot":
        verb = {"restaurant": "forgot", "laptop": "returned"}[domain]
        words = ["they", verb, "the", *aspect, "again", "."]
        span = Span(4, 3 + a_len)
        edges = [
            DependencyEdge(2, 1, "nsubj"),
            DependencyEdge(0, 2, "root"),
            DependencyEdge(span.end, 3, "det"),
            *_compounds(4, span.end),
            DependencyEdge(2, span.end, "obj"),
            DependencyEdge(2, span.end + 1, "advmod"),
            DependencyEdge(2, span.end + 2, "punct"),
        ]
    elif kind == "order":
        verb = {"restaurant": "order", "laptop": "buy"}[domain]
        words = ["we", "would", verb, "the", *aspect, "again", "."]
        span = Span(5, 4 + a_len)
        edges = [
            DependencyEdge(3, 1, "nsubj"),
            DependencyEdge(3, 2, "aux"),
            DependencyEdge(0, 3, "root"),
            DependencyEdge(span.end, 4, "det"),
            *_compounds(5, span.end),
            DependencyEdge(3, span.end, "obj"),
            DependencyEdge(3, span.end + 1, "advmod"),
            DependencyEdge(3, span.end + 2, "punct"),
        ]
    else:
        verb = {"restaurant": "came", "laptop": "shipped"}[domain]
        words = ["the", *aspect, verb, "out", "first", "."]
        span = Span(2, 1 + a_len)
        v = span.end + 1
        edges = [
            DependencyEdge(span.end, 1, "det"),
            *_compounds(2, span.end),
            DependencyEdge(v, span.end, "nsubj"),
            DependencyEdge(0, v, "root"),
            DependencyEdge(v, v + 1, "compound:prt"),
            DependencyEdge(v, v + 2, "advmod"),
            DependencyEdge(v, v + 3, "punct"),
        ]
    quads = [SentimentQuad(span, None, category, sentiment)]
    return words, edges, quads


def _both_implicit(rng: random.Random, domain: str):
    lead, sentiment = rng.choice((("not", NEGATIVE), ("exactly", POSITIVE), ("about", NEUTRAL)))
    words = [lead, "what", "we", "expected", "."]
    edges = [
        DependencyEdge(4, 1, "advmod"),
        DependencyEdge(4, 2, "obj"),
        DependencyEdge(4, 3, "nsubj"),
        DependencyEdge(0, 4, "root"),
        DependencyEdge(4, 5, "punct"),
    ]
    quads = [SentimentQuad(None, None, _GENERAL_CATEGORY[domain], sentiment)]
    return words, edges, quads


def _zero_quad(rng: random.Random, domain: str):
    if domain == "restaurant":
        choice = rng.choice(("noon", "friend"))
        if choice == "noon":
            words = ["we", "arrived", "around", "noon", "."]
            edges = [
                DependencyEdge(2, 1, "nsubj"),
                DependencyEdge(0, 2, "root"),
                DependencyEdge(4, 3, "case"),
                DependencyEdge(2, 4, "obl"),
                DependencyEdge(2, 5, "punct"),
            ]
        else:
            words = ["my", "friend", "ordered", "first", "."]
            edges = [
                DependencyEdge(2, 1, "nmod:poss"),
                DependencyEdge(3, 2, "nsubj"),
                DependencyEdge(0, 3, "root"),
                DependencyEdge(3, 4, "advmod"),
                DependencyEdge(3, 5, "punct"),
            ]
    else:
        choice = rng.choice(("week", "box"))
        if choice == "week":
            words = ["i", "bought", "it", "last", "week", "."]
            edges = [
                DependencyEdge(2, 1, "nsubj"),
                DependencyEdge(0, 2, "root"),
                DependencyEdge(2, 3, "obj"),
                DependencyEdge(5, 4, "amod"),
                DependencyEdge(2, 5, "obl:tmod"),
                DependencyEdge(2, 6, "punct"),
            ]
        else:
            words = ["the", "box", "arrived", "on", "tuesday", "."]
            edges = [
                DependencyEdge(2, 1, "det"),
                DependencyEdge(3, 2, "nsubj"),
                DependencyEdge(0, 3, "root"),
                DependencyEdge(5, 4, "case"),
                DependencyEdge(3, 5, "obl"),
                DependencyEdge(3, 6, "punct"),
            ]
    return words, edges, []


_BUILDERS = {
    "copular": _copular,
    "conj_two": _conj_two,
    "multi_opinion": _multi_opinion,
    "implicit_aspect": _implicit_aspect,
    "implicit_opinion": _implicit_opinion,
    "both_implicit": _both_implicit,
    "zero_quad": _zero_quad,
}


def generate_sentence(rng: random.Random, domain: str, sentence_id: str) -> SentenceGraph:
    pattern = rng.choices(_PATTERNS, weights=_PATTERN_WEIGHTS, k=1)[0]
    words, edges, quads = _BUILDERS[pattern](rng, domain)
    covered = {edge.dependent for edge in edges}
    assert covered == set(range(1, len(words) + 1)), f"pattern {pattern} left tokens unattached"
    tokens = tuple(Token(i, w) for i, w in enumerate(words, start=1))
    return SentenceGraph(sentence_id, tokens, tuple(edges), tuple(quads))


def generate_corpus(domain: str, split: str) -> list[SentenceGraph]:
    """The stand-in corpus for one domain and split, fully deterministic."""
    if domain not in SPLIT_SIZES:
        raise ValueError(f"unknown domain {domain!r}, expected one of {sorted(SPLIT_SIZES)}")
    if split not in SPLITS:
        raise ValueError(f"unknown split {split!r}, expected one of {list(SPLITS)}")
    rng = random.Random(f"{domain}:{split}")
    size = SPLIT_SIZES[domain][split]
    return [generate_sentence(rng, domain, f"{split}:{i}") for i in range(1, size + 1)]


def generate_domain(domain: str) -> dict[str, list[SentenceGraph]]:
    return {split: generate_corpus(domain, split) for split in SPLITS}


def render_conllu(graph: SentenceGraph) -> str:
    """One CoNLL-U block (without trailing blank line) for a sentence."""
    attachment = {edge.dependent: (edge.head, edge.label) for edge in graph.edges}
    lines = [f"# sent_id = {graph.sentence_id}", f"# text = {graph.text}"]
    for token in graph.tokens:
        head, label = attachment[token.index]
        lines.append(
            "\t".join([str(token.index), token.surface, "_", "_", "_", "_", str(head), label, "_", "_"])
        )
    return "\n".join(lines)


def write_corpus(domain: str, out_dir: str | Path) -> dict[str, tuple[Path, Path]]:
    """Write {split}.tsv and {split}.conllu files; returns paths per split."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, tuple[Path, Path]] = {}
    for split in SPLITS:
        graphs = generate_corpus(domain, split)
        tsv_path = out / f"{split}.tsv"
        conllu_path = out / f"{split}.conllu"
        tsv_path.write_text("".join(render_acos_line(g) + "\n" for g in graphs), encoding="utf-8")
        conllu_path.write_text("\n\n".join(render_conllu(g) for g in graphs) + "\n", encoding="utf-8")
        paths[split] = (tsv_path, conllu_path)
    return paths
