"""Dataset loading, answer-set metrics, the stage-injection harness, and
the query-complexity categorizer.

Metrics are macro-averaged precision/recall/F1 over answer sets.  The
harness can replace any pipeline stage with a gold artifact carried by
the dataset record, which supports cumulative ablation runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime

from . import grounding, lam, rules, sparql, store
from .penman import parse_penman
from .terms import Iri, Literal


STAGES = ("GT_AMR", "GT_LAMBDA", "GT_EL", "GT_RL", "GT_KB_LAMBDA", "GT_SPARQL")

CATEGORIES = ("SIMPLE", "MEDIUM", "COMPLEX", "UNLABELED")


class MissingGoldStage(ValueError):
    def __init__(self, stage):
        self.stage = stage
        super().__init__(f"record lacks the gold artifact for stage {stage}")


# -------------------------------------------------------------------- scoring


def score(gold, sys):
    """Answer-set precision/recall/F1 with macro empty-set conventions."""
    gold, sys = set(gold), set(sys)
    if not gold and not sys:
        return (1.0, 1.0, 1.0)
    if not gold:
        return (0.0, 1.0, 0.0)
    if not sys:
        return (0.0, 0.0, 0.0)
    hit = len(gold & sys)
    p = hit / len(sys)
    r = hit / len(gold)
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return (p, r, f1)


# -------------------------------------------------------------------- dataset


@dataclass
class DatasetRecord:
    id: str
    question: str
    gold_sparql: str
    gold_answers: set
    kb: str = "wikidata"
    category: str = "UNLABELED"
    gold_amr: str = None
    gold_lambda: dict = None
    gold_entities: dict = None
    gold_relations: dict = None

    def __post_init__(self):
        if self.gold_answers is None:
            raise ValueError(f"record {self.id}: gold answers must not be null")
        self.gold_answers = set(self.gold_answers)
        if self.category not in CATEGORIES:
            raise ValueError(f"record {self.id}: bad category {self.category!r}")


def load_dataset(path):
    """Read DatasetRecords from a JSON Lines file."""
    records = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                records.append(DatasetRecord(**data))
            except (json.JSONDecodeError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return records


# ------------------------------------------------------------------- pipeline


@dataclass
class PipelineContext:
    kb: grounding.KbProfile
    lexicon: grounding.Lexicon = None
    store: store.TripleStore = None
    executor: object = None  # overrides store execution when set
    now: datetime = None
    ordinal_offset_mode: str = "zero_based"


def normalize_answers(result, kb):
    """Result set (or ASK boolean) -> comparable set of strings.

    IRIs are prefix-compressed, dateTime values truncated to days.
    """
    if isinstance(result, bool):
        return {"true" if result else "false"}
    out = set()
    for row in result:
        for value in row.values():
            if value is None:
                continue
            out.add(normalize_term(value, kb))
    return out


def normalize_term(value, kb):
    if isinstance(value, Iri):
        return kb.compress(value)
    if isinstance(value, Literal) and isinstance(value.value, datetime):
        return value.value.strftime("%Y-%m-%d")
    if isinstance(value, Literal):
        return value.lexical()
    return str(value)


def run_pipeline(record, ctx, overrides=()):
    """Run one record through the pipeline with gold-stage injection.

    Returns (answer set, trace dict of intermediate representations).
    """
    overrides = set(overrides)
    bad = overrides - set(STAGES)
    if bad:
        raise ValueError(f"unknown stage overrides: {sorted(bad)}")
    trace = {"id": record.id, "overrides": sorted(overrides)}

    # questions enter as PENMAN text, so the parse stage and its gold
    # injection coincide; the override only asserts the artifact exists
    if "GT_AMR" in overrides and record.gold_amr is None:
        raise MissingGoldStage("GT_AMR")
    if record.gold_amr is None:
        raise MissingGoldStage("GT_AMR")
    graph = parse_penman(record.gold_amr)
    trace["amr"] = record.gold_amr

    if "GT_SPARQL" in overrides:
        if not record.gold_sparql:
            raise MissingGoldStage("GT_SPARQL")
        query = sparql.parse_sparql(record.gold_sparql, ctx.kb)
        trace["sparql"] = record.gold_sparql
        answers = _execute(query, ctx)
        trace["answers"] = sorted(answers)
        return answers, trace

    use_gold_lambda = "GT_LAMBDA" in overrides or "GT_KB_LAMBDA" in overrides
    if use_gold_lambda:
        if record.gold_lambda is None:
            raise MissingGoldStage("GT_LAMBDA" if "GT_LAMBDA" in overrides
                                   else "GT_KB_LAMBDA")
        expr = lam.from_json(record.gold_lambda)
    else:
        expr, _applied = rules.translate(
            graph, ordinal_offset_mode=ctx.ordinal_offset_mode)
    trace["lambda"] = lam.pretty(expr)

    gold_entities = "GT_EL" in overrides or "GT_KB_LAMBDA" in overrides
    gold_relations = "GT_RL" in overrides or "GT_KB_LAMBDA" in overrides
    if gold_entities and record.gold_entities is None:
        raise MissingGoldStage("GT_EL")
    if gold_relations and record.gold_relations is None:
        raise MissingGoldStage("GT_RL")
    if gold_entities and gold_relations:
        grounded = grounding.ground_with_gold(
            expr, record.gold_entities, record.gold_relations, ctx.kb)
    else:
        if ctx.lexicon is None:
            raise ValueError("pipeline context has no lexicon")
        lex = ctx.lexicon
        if gold_entities or gold_relations:
            entities = (grounding.Lexicon.from_dict(
                {"entities": record.gold_entities}).entities
                if gold_entities else lex.entities)
            relations = (grounding.Lexicon.from_dict(
                {"relations": record.gold_relations}).relations
                if gold_relations else lex.relations)
            lex = grounding.Lexicon(entities, relations)
        grounded = grounding.ground(expr, lex, ctx.kb)
    trace["grounded"] = lam.pretty(grounded)

    query = sparql.emit(grounded, ctx.kb)
    trace["sparql"] = sparql.render(query, ctx.kb)
    answers = _execute(query, ctx)
    trace["answers"] = sorted(answers)
    return answers, trace


def _execute(query, ctx):
    if ctx.executor is not None:
        result = ctx.executor(sparql.render(query, ctx.kb))
    elif ctx.store is not None:
        result = store.eval_query(ctx.store, query, now=ctx.now)
    else:
        raise ValueError("pipeline context has neither a store nor an executor")
    return normalize_answers(result, ctx.kb)


# --------------------------------------------------------------------- report


@dataclass
class QuestionScore:
    id: str
    category: str
    precision: float
    recall: float
    f1: float
    error: str = None


@dataclass
class ScoreReport:
    questions: list = field(default_factory=list)

    @property
    def macro_precision(self):
        return _mean([q.precision for q in self.questions])

    @property
    def macro_recall(self):
        return _mean([q.recall for q in self.questions])

    @property
    def macro_f1(self):
        return _mean([q.f1 for q in self.questions])

    def category_counts(self):
        counts = {}
        for q in self.questions:
            counts[q.category] = counts.get(q.category, 0) + 1
        return counts

    def to_json(self):
        return {
            "questions": [
                {"id": q.id, "category": q.category, "precision": q.precision,
                 "recall": q.recall, "f1": q.f1, "error": q.error}
                for q in self.questions
            ],
            "macro": {"precision": self.macro_precision,
                      "recall": self.macro_recall, "f1": self.macro_f1},
            "categories": self.category_counts(),
        }

    def to_text(self):
        lines = []
        width = max([len(q.id) for q in self.questions] + [len("question")])
        header = f"{'question':<{width}}  {'P':>5}  {'R':>5}  {'F1':>5}"
        lines.append(header)
        lines.append("-" * len(header))
        for q in self.questions:
            lines.append(f"{q.id:<{width}}  {q.precision:>5.2f}  "
                         f"{q.recall:>5.2f}  {q.f1:>5.2f}")
        lines.append("-" * len(header))
        lines.append(f"{'macro':<{width}}  {self.macro_precision:>5.2f}  "
                     f"{self.macro_recall:>5.2f}  {self.macro_f1:>5.2f}")
        return "\n".join(lines)


def _mean(values):
    return sum(values) / len(values) if values else 0.0


def evaluate(records, ctx, overrides=()):
    """Score every record under the given stage overrides."""
    report = ScoreReport()
    for record in records:
        try:
            answers, _trace = run_pipeline(record, ctx, overrides)
            p, r, f1 = score(record.gold_answers, answers)
            error = None
        except MissingGoldStage:
            raise
        except (ValueError, TypeError) as exc:
            p, r, f1 = score(record.gold_answers, set())
            error = f"{type(exc).__name__}: {exc}"
        report.questions.append(
            QuestionScore(record.id, record.category, p, r, f1, error))
    return report


ABLATION_CHAIN = (
    ("none", ()),
    ("GT_AMR", ("GT_AMR",)),
    ("GT_LAMBDA", ("GT_AMR", "GT_LAMBDA")),
    ("GT_EL", ("GT_AMR", "GT_LAMBDA", "GT_EL")),
    ("GT_RL", ("GT_AMR", "GT_LAMBDA", "GT_EL", "GT_RL")),
    ("GT_KB_LAMBDA", ("GT_AMR", "GT_LAMBDA", "GT_EL", "GT_RL", "GT_KB_LAMBDA")),
    ("GT_SPARQL", ("GT_AMR", "GT_LAMBDA", "GT_EL", "GT_RL", "GT_KB_LAMBDA",
                   "GT_SPARQL")),
)


def ablation(records, ctx):
    """Cumulative gold-injection sweep; returns [(stage label, report)]."""
    return [(label, evaluate(records, ctx, overrides))
            for label, overrides in ABLATION_CHAIN]


# ---------------------------------------------------------------- categorizer


def _interval_stems(q):
    stems = set()
    for name in _all_vars(q):
        if name.endswith("Start"):
            stems.add(name[:-5])
        elif name.endswith("End"):
            stems.add(name[:-3])
    return stems


def _all_vars(q):
    out = set()

    def visit(elements):
        for el in elements:
            if isinstance(el, sparql.TriplePattern):
                for t in (el.s, el.p, el.o):
                    if isinstance(t, sparql.VarRef):
                        out.add(t.name)
            elif isinstance(el, sparql.Bind):
                out.add(el.var)
            elif isinstance(el, sparql.Filter):
                for c in el.clauses:
                    for side in (c.left, c.right):
                        if isinstance(side, sparql.VarRef):
                            out.add(side.name)
            elif isinstance(el, sparql.UnionBlock):
                for branch in el.branches:
                    visit(branch)

    visit(q.where)
    return out


def _walk(elements):
    for el in elements:
        yield el
        if isinstance(el, sparql.UnionBlock):
            for branch in el.branches:
                yield from _walk(branch)


def categorize(q):
    """SIMPLE / MEDIUM / COMPLEX by interval count and reasoning constructs."""
    stems = _interval_stems(q)
    temporal_filter = False
    duration_binds = False
    for el in _walk(q.where):
        if isinstance(el, sparql.Filter):
            for c in el.clauses:
                for side in (c.left, c.right):
                    if isinstance(side, sparql.VarRef) and (
                            side.name.endswith("Start") or side.name.endswith("End")):
                        temporal_filter = True
        elif isinstance(el, sparql.Bind) and isinstance(el.expr, sparql.DurAdd):
            duration_binds = True
    extra = duration_binds or q.aggregate is not None or q.order_by is not None
    if len(stems) >= 2 and extra:
        return "COMPLEX"
    if temporal_filter and len(stems) >= 2:
        return "MEDIUM"
    if stems and extra:
        return "MEDIUM"
    return "SIMPLE"
