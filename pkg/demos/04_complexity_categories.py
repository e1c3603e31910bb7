"""Classify questions by the structural complexity of their queries.

The categorizer inspects a compiled SPARQL query's temporal structure:

  SIMPLE   no interval reasoning (plain lookups and joins)
  MEDIUM   one interval comparison between two event intervals
  COMPLEX  an interval that must itself be computed (e.g. derived from
           a birth date with duration arithmetic) before comparing

Run from the repository root:  python3 demos/04_complexity_categories.py
"""

import os

from amr2sparql import grounding, sparql, store
from amr2sparql.evaluation import (
    PipelineContext, categorize, load_dataset, run_pipeline,
)

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")


def main():
    ctx = PipelineContext(
        kb=grounding.WIKIDATA,
        lexicon=grounding.Lexicon.load(os.path.join(FIXTURES, "lexicon.json")),
        store=store.TripleStore.from_file(os.path.join(FIXTURES, "fixture.nt")),
    )
    dataset = load_dataset(os.path.join(FIXTURES, "dataset.jsonl"))
    for record in dataset:
        _answers, trace = run_pipeline(record, ctx)
        query = sparql.parse_sparql(trace["sparql"], ctx.kb)
        print(f"{record.id:<26} {categorize(query):<8} {record.question}")


if __name__ == "__main__":
    main()
