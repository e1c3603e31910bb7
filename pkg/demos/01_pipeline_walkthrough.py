"""Walk one question through every pipeline stage.

Question: "When was the movie Titanic released?"
Stages:   PENMAN text -> AMR graph -> lambda expression -> grounded
          expression -> SPARQL -> answers from the bundled triple store.

Run from the repository root:  python3 demos/01_pipeline_walkthrough.py
"""

import os

from amr2sparql import grounding, lam, penman, rules, sparql, store
from amr2sparql.evaluation import normalize_answers

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")

AMR = """(r / release-01
   :arg1 (m / movie :name (n / name :op1 "Titanic"))
   :time (a / amr-unknown))"""


def main():
    print("PENMAN input:")
    print(AMR)

    graph = penman.parse_penman(AMR)
    print("\nAMR graph:")
    print(f"  root: {graph.root}")
    for src, role, target in graph.edges:
        print(f"  {src} --{role}--> {target}")

    expr, applied = rules.translate(graph)
    print("\nLambda expression (rules: "
          + ", ".join(str(r) for r in applied) + "):")
    print("  " + lam.pretty(expr))

    kb = grounding.WIKIDATA
    lexicon = grounding.Lexicon.load(os.path.join(FIXTURES, "lexicon.json"))
    grounded = grounding.ground(expr, lexicon, kb)
    print("\nGrounded expression:")
    print("  " + lam.pretty(grounded))

    query = sparql.emit(grounded, kb)
    print("\nSPARQL:")
    print(sparql.render(query, kb))

    ts = store.TripleStore.from_file(os.path.join(FIXTURES, "fixture.nt"))
    answers = normalize_answers(store.eval_query(ts, query), kb)
    print("\nAnswers:", sorted(answers))


if __name__ == "__main__":
    main()
