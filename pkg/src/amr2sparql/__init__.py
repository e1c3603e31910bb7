"""Compile PENMAN-serialized question AMRs into executable SPARQL.

Pipeline: PENMAN parse -> rule-based translation to a lambda-calculus
intermediate form -> entity/relation grounding against a KB profile ->
SPARQL emission -> execution on an in-memory store or a live endpoint,
plus an answer-set evaluation harness.
"""

from .penman import (
    AmrGraph, AmrNode, DuplicateConceptError, PenmanSyntaxError, find_unknowns,
    parse_penman, serialize_penman,
)
from .rules import RuleId, UnsupportedConstruct, rule_inventory, translate
from .grounding import (
    DBPEDIA, PROFILES, WIKIDATA, GroundingError, KbProfile, Lexicon,
    MissingGold, ProfileMismatch, UnlinkedEntity, UnlinkedRelation, ground,
    ground_with_gold,
)
from .sparql import (
    SparqlParseError, SparqlQuery, UnemittableConstruct, emit, parse_sparql,
    render,
)
from .store import TripleStore, eval_bruteforce, eval_query, load_ntriples
from .endpoint import EndpointClient, EndpointConfig
from .evaluation import (
    DatasetRecord, MissingGoldStage, PipelineContext, ScoreReport, ablation,
    categorize, evaluate, load_dataset, run_pipeline, score,
)

__version__ = "0.1.0"

__all__ = [
    "AmrGraph", "AmrNode", "DuplicateConceptError", "PenmanSyntaxError",
    "find_unknowns", "parse_penman", "serialize_penman",
    "RuleId", "UnsupportedConstruct", "rule_inventory", "translate",
    "DBPEDIA", "PROFILES", "WIKIDATA", "GroundingError", "KbProfile",
    "Lexicon", "MissingGold", "ProfileMismatch", "UnlinkedEntity",
    "UnlinkedRelation", "ground", "ground_with_gold",
    "SparqlParseError", "SparqlQuery", "UnemittableConstruct", "emit",
    "parse_sparql", "render",
    "TripleStore", "eval_bruteforce", "eval_query", "load_ntriples",
    "EndpointClient", "EndpointConfig",
    "DatasetRecord", "MissingGoldStage", "PipelineContext", "ScoreReport",
    "ablation", "categorize", "evaluate", "load_dataset", "run_pipeline",
    "score",
    "__version__",
]
