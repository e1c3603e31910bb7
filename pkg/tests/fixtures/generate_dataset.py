"""Regenerate dataset.jsonl from the worked-example AMRs.

Run from the repository root:  python3 tests/fixtures/generate_dataset.py
Verifies that the compiled query and the hand-written gold query return
the same answers on fixture.nt before writing anything.
"""

import json
import os

from amr2sparql import evaluation, grounding, lam, penman, rules, sparql, store

HERE = os.path.dirname(os.path.abspath(__file__))

AMRS = {
    "titanic-release": """(r / release-01
   :arg1 (m / movie :name (n / name :op1 "Titanic"))
   :time (a / amr-unknown))""",
    "titanic-director": """(d / direct-01
   :arg0 (a / amr-unknown)
   :arg1 (m / movie :name (n / name :op1 "Titanic")))""",
    "cameron-dicaprio-movie": """(m / movie
   :mod (a / amr-unknown)
   :arg1-of (d / direct-01
      :arg0 (c / person :name (n1 / name :op1 "James" :op2 "Cameron")))
   :arg1-of (s / star-01
      :arg0 (p / person :name (n2 / name :op1 "Leonardo" :op2 "DiCaprio"))))""",
    "cold-war-president": """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p2 / position :name (n1 / name :op1 "President" :op2 "of" :op3 "the" :op4 "United" :op5 "States"))
   :time (w / war :name (n2 / name :op1 "Cold" :op2 "War")))""",
    "douglas-bravo-teenager": """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p2 / position :name (n1 / name :op1 "President" :op2 "of" :op3 "the" :op4 "United" :op5 "States"))
   :time (t / teenager :domain (d / person :name (n2 / name :op1 "Douglas" :op2 "Bravo"))))""",
}

GOLD_SPARQL = {
    "titanic-release": "SELECT ?a WHERE { wd:Q44578 wdt:P577 ?a }",
    "titanic-director": "select distinct ?a where { wd:Q44578 wdt:P57 ?a}",
    "cameron-dicaprio-movie":
        "select distinct ?a where {?a wdt:P57 wd:Q42574. ?a wdt:P161 wd:Q38111. }",
    "cold-war-president": """SELECT DISTINCT ?a WHERE {
  ?a wdt:P39 wd:Q11696.  ?a p:P39 ?e1.
  ?e1 ps:P39 wd:Q11696.
  ?e1 pq:P580 ?st1.  ?e1 pq:P582 ?et1.
  wd:Q8683 wdt:P580 ?st2.
  wd:Q8683 wdt:P582 ?et2.
FILTER (?st1 <= ?et2 && ?st2 <= ?et1)}""",
    "douglas-bravo-teenager": """SELECT DISTINCT ?a WHERE {
  ?a p:P39 ?e.  ?e ps:P39 wd:Q11696.
  ?e pq:P580 ?st1.  ?e pq:P582 ?et1.
  wd:Q4095606 wdt:P569 ?x.
  bind ((?x + "P13Y"^^xsd:duration) as ?st2)
  bind ((?x + "P19Y"^^xsd:duration) as ?et2)
  FILTER (?st1<=?et2 && ?st2<=?et1) }""",
}

QUESTIONS = {
    "titanic-release": "When was Titanic movie released?",
    "titanic-director": "Who directed Titanic movie?",
    "cameron-dicaprio-movie":
        "Which movie is directed by James Cameron starring Leonardo DiCaprio?",
    "cold-war-president": "Who was the US president during cold war?",
    "douglas-bravo-teenager":
        "Who was president of the US when Douglas Bravo was a teenager?",
}

CATEGORY = {
    "titanic-release": "SIMPLE",
    "titanic-director": "SIMPLE",
    "cameron-dicaprio-movie": "SIMPLE",
    "cold-war-president": "MEDIUM",
    "douglas-bravo-teenager": "COMPLEX",
}

GOLD_ENTITIES = {
    "titanic-release": {"Titanic": "wd:Q44578"},
    "titanic-director": {"Titanic": "wd:Q44578"},
    "cameron-dicaprio-movie": {"James Cameron": "wd:Q42574",
                               "Leonardo DiCaprio": "wd:Q38111"},
    "cold-war-president": {"President of the United States": "wd:Q11696",
                           "Cold War": "wd:Q8683"},
    "douglas-bravo-teenager": {"President of the United States": "wd:Q11696",
                               "Douglas Bravo": "wd:Q4095606"},
}

GOLD_RELATIONS = {
    "titanic-release": {"release-01": {"pid": "P577"}},
    "titanic-director": {"direct-01": {"pid": "P57", "inverse": True}},
    "cameron-dicaprio-movie": {"direct-01": {"pid": "P57", "inverse": True},
                               "star-01": {"pid": "P161", "inverse": True}},
    "cold-war-president": {"hold-01": {"pid": "P39", "reified": True,
                                       "qualifiers": "start_end"}},
    "douglas-bravo-teenager": {"hold-01": {"pid": "P39", "reified": True,
                                           "qualifiers": "start_end"}},
}


def main():
    kb = grounding.WIKIDATA
    lex = grounding.Lexicon.load(os.path.join(HERE, "lexicon.json"))
    ts = store.TripleStore.from_file(os.path.join(HERE, "fixture.nt"))

    records = []
    for rid, amr in AMRS.items():
        graph = penman.parse_penman(amr)
        expr, _applied = rules.translate(graph)
        grounded = grounding.ground(expr, lex, kb)
        query = sparql.emit(grounded, kb)
        sys_answers = evaluation.normalize_answers(store.eval_query(ts, query), kb)
        gold_query = sparql.parse_sparql(GOLD_SPARQL[rid], kb)
        gold_answers = evaluation.normalize_answers(
            store.eval_query(ts, gold_query), kb)
        if sys_answers != gold_answers:
            raise SystemExit(
                f"{rid}: compiled {sorted(sys_answers)} != gold {sorted(gold_answers)}")
        records.append({
            "id": rid,
            "question": QUESTIONS[rid],
            "gold_amr": amr,
            "gold_lambda": lam.to_json(expr),
            "gold_entities": GOLD_ENTITIES[rid],
            "gold_relations": GOLD_RELATIONS[rid],
            "gold_sparql": GOLD_SPARQL[rid],
            "gold_answers": sorted(gold_answers),
            "category": CATEGORY[rid],
            "kb": "wikidata",
        })

    with open(os.path.join(HERE, "dataset.jsonl"), "w") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True) + "\n")
    print(f"wrote {len(records)} records")


if __name__ == "__main__":
    main()
