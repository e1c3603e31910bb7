"""Temporal questions: interval overlap and calendar-duration arithmetic.

Two questions that need more than a single triple lookup:

  * "Who was the US president during the Cold War?"  -- the answer's
    term of office (a reified statement with start/end qualifiers) must
    overlap the war's interval.
  * "Who was president of the US when Douglas Bravo was a teenager?"
    -- the comparison interval is derived from a birth date by adding
    the durations P13Y and P19Y.

Run from the repository root:  python3 demos/02_temporal_reasoning.py
"""

import os

from amr2sparql import grounding, lam, penman, rules, sparql, store
from amr2sparql.evaluation import normalize_answers

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")

COLD_WAR = """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p2 / position :name (n1 / name :op1 "President" :op2 "of"
                               :op3 "the" :op4 "United" :op5 "States"))
   :time (w / war :name (n2 / name :op1 "Cold" :op2 "War")))"""

TEENAGER = """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p2 / position :name (n1 / name :op1 "President" :op2 "of"
                               :op3 "the" :op4 "United" :op5 "States"))
   :time (t / teenager
      :domain (d / person :name (n2 / name :op1 "Douglas" :op2 "Bravo"))))"""


def show(title, amr, lexicon, kb, ts):
    print("=" * 72)
    print(title)
    expr, _ = rules.translate(penman.parse_penman(amr))
    print("\nlambda:   " + lam.pretty(expr))
    grounded = grounding.ground(expr, lexicon, kb)
    query = sparql.emit(grounded, kb)
    print("\n" + sparql.render(query, kb))
    answers = normalize_answers(store.eval_query(ts, query), kb)
    print("\nanswers:  " + ", ".join(sorted(answers)) + "\n")


def main():
    kb = grounding.WIKIDATA
    lexicon = grounding.Lexicon.load(os.path.join(FIXTURES, "lexicon.json"))
    ts = store.TripleStore.from_file(os.path.join(FIXTURES, "fixture.nt"))
    show("Interval overlap against a reified office-held statement",
         COLD_WAR, lexicon, kb, ts)
    show("Interval derived from a birth date via duration addition",
         TEENAGER, lexicon, kb, ts)


if __name__ == "__main__":
    main()
