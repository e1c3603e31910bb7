"""Golden tests for the AMR-to-lambda translation rules, one per rule."""

import pytest

from amr2sparql import lam
from amr2sparql.penman import parse_penman
from amr2sparql.rules import UnsupportedConstruct, rule_inventory, translate


def tr(text, **kwargs):
    return translate(parse_penman(text), **kwargs)


WHEN_AMR = """(r / release-01
   :arg1 (m / movie :name (n / name :op1 "Titanic"))
   :time (a / amr-unknown))"""


def test_when_rule():
    expr, applied = tr(WHEN_AMR)
    assert "temporal.when" in [str(r) for r in applied]
    assert lam.pretty(expr) == 'λer. release-01(r, "Titanic") ∧ interval(er, r)'
    assert expr.bound == (lam.IntervalVar("er"),)


BEFORE_AMR = """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p / position :name (n1 / name :op1 "President"))
   :time (b / before
      :op1 (w / war :name (n2 / name :op1 "WW2"))))"""


def test_before_rule():
    expr, applied = tr(BEFORE_AMR)
    assert "temporal.before" in [str(r) for r in applied]
    assert isinstance(expr, lam.ArgMax)
    assert (expr.offset, expr.limit) == (0, 1)
    assert lam.pretty(expr) == (
        'argmax(λa. hold-01(h, a, "President"), '
        'λa. λeh. interval(eh, h) ∧ interval(ew, "WW2") ∧ before(eh, ew), 0, 1)')


def test_before_synonyms():
    for concept in ("prior", "precede"):
        expr, _ = tr(BEFORE_AMR.replace("b / before", f"b / {concept}"))
        assert isinstance(expr, lam.ArgMax)
        assert "before(eh, ew)" in lam.pretty(expr)


def test_after_rule():
    expr, applied = tr(BEFORE_AMR.replace("b / before", "b / after"))
    assert "temporal.after" in [str(r) for r in applied]
    assert isinstance(expr, lam.ArgMin)
    assert "after(eh, ew)" in lam.pretty(expr)
    assert (expr.offset, expr.limit) == (0, 1)


OVERLAP_AMR = """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p / position :name (n1 / name :op1 "President"))
   :time (w / war :name (n2 / name :op1 "Cold" :op2 "War")))"""


def test_overlap_rule():
    expr, applied = tr(OVERLAP_AMR)
    assert "temporal.overlap" in [str(r) for r in applied]
    assert lam.pretty(expr) == (
        'λa. hold-01(h, a, "President") ∧ interval(eh, h) '
        '∧ interval(ew, "Cold War") ∧ overlap(eh, ew)')


ORDINAL_AMR = """(w / war
   :mod (a / amr-unknown)
   :ord (o / ordinal-entity :value 2))"""


def test_ordinal_rule_zero_based():
    expr, applied = tr(ORDINAL_AMR)
    assert "temporal.ordinal" in [str(r) for r in applied]
    assert isinstance(expr, lam.ArgMin)
    assert (expr.offset, expr.limit) == (1, 1)
    assert "interval(ew, w)" in lam.pretty(expr)


def test_ordinal_rule_plus_one():
    expr, _ = tr(ORDINAL_AMR, ordinal_offset_mode="plus_one")
    assert (expr.offset, expr.limit) == (3, 1)


def test_ordinal_minus_one_is_argmax():
    expr, applied = tr(ORDINAL_AMR.replace(":value 2", ":value -1"))
    assert "temporal.ordinal.last" in [str(r) for r in applied]
    assert isinstance(expr, lam.ArgMax)
    assert (expr.offset, expr.limit) == (0, 1)


def test_ordinal_bad_mode_rejected():
    with pytest.raises(ValueError):
        tr(ORDINAL_AMR, ordinal_offset_mode="surprise")


NOW_AMR = """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p / position :name (n1 / name :op1 "President"))
   :time (n2 / now))"""


def test_now_rule():
    expr, applied = tr(NOW_AMR)
    assert "temporal.now" in [str(r) for r in applied]
    assert lam.pretty(expr) == (
        'λa. hold-01(h, a, "President") ∧ interval(eh, h) '
        '∧ interval(en2, now()) ∧ overlap(eh, en2)')


DATE_AMR = """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p / position :name (n1 / name :op1 "President"))
   :time (d / date-entity :year 1962 :month 10))"""


def test_date_entity_rule():
    expr, applied = tr(DATE_AMR)
    assert "temporal.date" in [str(r) for r in applied]
    assert lam.pretty(expr) == (
        'λa. hold-01(h, a, "President") ∧ interval(ed, date("01-10-1962")) '
        '∧ interval(eh, h) ∧ overlap(eh, ed)')


TEENAGER_AMR = """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p / position :name (n1 / name :op1 "President"))
   :time (t / teenager :domain (d / person :name (n2 / name :op1 "Douglas" :op2 "Bravo"))))"""


def test_teenager_rule():
    expr, applied = tr(TEENAGER_AMR)
    assert "temporal.teenager" in [str(r) for r in applied]
    assert lam.pretty(expr) == (
        'λa. hold-01(h, a, "President") ∧ interval(eh, h) '
        '∧ teenager(ed, "Douglas Bravo") ∧ overlap(eh, ed)')


COUNT_AMR = """(d / direct-01
   :arg0 (c / person :name (n / name :op1 "James" :op2 "Cameron"))
   :arg1 (m / movie :quant (a / amr-unknown)))"""


def test_count_rule():
    expr, applied = tr(COUNT_AMR)
    assert "numerical.count" in [str(r) for r in applied]
    assert isinstance(expr, lam.Count)
    assert lam.pretty(expr) == 'count(λm. direct-01(d, "James Cameron", m))'


FIRST_AMR = """(h / hold-01
   :arg0 (a / amr-unknown)
   :arg1 (p / position :name (n1 / name :op1 "President"))
   :mod (f / first))"""


def test_first_rule():
    expr, applied = tr(FIRST_AMR)
    assert "numerical.first" in [str(r) for r in applied]
    assert isinstance(expr, lam.Min)
    assert (expr.offset, expr.limit) == (0, 1)
    assert lam.pretty(expr) == 'min(λa. hold-01(h, a, "President"), 0, 1)'


def test_last_rule():
    expr, applied = tr(FIRST_AMR.replace("f / first", "f / last"))
    assert "numerical.last" in [str(r) for r in applied]
    assert isinstance(expr, lam.Max)


MOST_AMR = """(q / have-quant-91
   :arg1 (m / match :arg1-of (w / win-01 :arg0 (t / team :mod (a / amr-unknown))))
   :arg3 (m2 / most))"""


def test_most_rule():
    expr, applied = tr(MOST_AMR)
    assert "numerical.most" in [str(r) for r in applied]
    assert isinstance(expr, lam.ArgMax)
    assert [v.name for v in expr.target.bound] == ["t"]
    assert [v.name for v in expr.key.bound] == ["t", "m"]
    assert (expr.offset, expr.limit) == (0, 1)
    assert "win-01(w, t, m)" in lam.pretty(expr)


def test_least_rule():
    expr, applied = tr(MOST_AMR.replace("m2 / most", "m2 / least"))
    assert "numerical.least" in [str(r) for r in applied]
    assert isinstance(expr, lam.ArgMin)


MORE_AMR = """(c / have-degree-91
   :arg1 (x / score-01 :arg0 (a / amr-unknown))
   :arg3 (m / more)
   :arg4 (y / score-01 :arg0 (t / team :name (n / name :op1 "B"))))"""


def test_more_rule():
    expr, applied = tr(MORE_AMR)
    assert "numerical.more" in [str(r) for r in applied]
    assert isinstance(expr, lam.Abstraction)
    assert "cmp(x, y, >)" in lam.pretty(expr)
    assert 'score-01(y, "B")' in lam.pretty(expr)


def test_less_rule():
    expr, applied = tr(MORE_AMR.replace("m / more", "m / less"))
    assert "numerical.less" in [str(r) for r in applied]
    assert "cmp(x, y, <)" in lam.pretty(expr)


BOOLEAN_AMR = """(m / marry-01
   :arg1 (p1 / person :name (n1 / name :op1 "A"))
   :arg2 (p2 / person :name (n2 / name :op1 "B")))"""


def test_boolean_rule():
    expr, applied = tr(BOOLEAN_AMR)
    assert "base.boolean" in [str(r) for r in applied]
    assert lam.pretty(expr) == 'ask(marry-01(m, "A", "B"))'


def test_spatial_unsupported():
    amr = """(b / be-located-at-91
       :arg1 (c / city :mod (a / amr-unknown))
       :arg2 (c2 / country :name (n / name :op1 "France"))
       :mod (s / south))"""
    with pytest.raises(UnsupportedConstruct):
        tr(amr)


def test_inverse_roles_normalize():
    forward = """(d / direct-01
       :arg0 (a / amr-unknown)
       :arg1 (m / movie :name (n / name :op1 "Titanic")))"""
    inverted = """(a / amr-unknown
       :arg0-of (d / direct-01
          :arg1 (m / movie :name (n / name :op1 "Titanic"))))"""
    assert lam.pretty(tr(forward)[0]) == lam.pretty(tr(inverted)[0])


def test_mod_unknown_projects_parent():
    amr = """(m / movie
       :mod (a / amr-unknown)
       :arg1-of (d / direct-01
          :arg0 (c / person :name (n1 / name :op1 "James" :op2 "Cameron"))))"""
    expr, _ = tr(amr)
    assert expr.bound == (lam.Var("m"),)
    assert lam.pretty(expr) == 'λm. direct-01(d, "James Cameron", m)'


def test_multi_hop_conjunction():
    amr = """(m / movie
       :mod (a / amr-unknown)
       :arg1-of (d / direct-01
          :arg0 (c / person :name (n1 / name :op1 "James" :op2 "Cameron")))
       :arg1-of (s / star-01
          :arg0 (p / person :name (n2 / name :op1 "Leonardo" :op2 "DiCaprio"))))"""
    expr, _ = tr(amr)
    assert lam.pretty(expr) == (
        'λm. direct-01(d, "James Cameron", m) ∧ star-01(s, "Leonardo DiCaprio", m)')


def test_disjunction_bodies():
    amr = """(o / or
       :op1 (w / write-01 :arg0 (a / amr-unknown)
             :arg1 (b / book :name (n / name :op1 "X")))
       :op2 (c / compose-01 :arg0 a
             :arg1 (s / song :name (n2 / name :op1 "Y"))))"""
    expr, _ = tr(amr)
    assert lam.pretty(expr) == (
        'λa. (write-01(w, a, "X")) ∨ (compose-01(c, a, "Y"))')


def test_all_translations_validate():
    for amr in (WHEN_AMR, BEFORE_AMR, OVERLAP_AMR, ORDINAL_AMR, NOW_AMR,
                DATE_AMR, TEENAGER_AMR, COUNT_AMR, FIRST_AMR, MOST_AMR,
                MORE_AMR, BOOLEAN_AMR):
        expr, _ = tr(amr)
        assert lam.validate(expr) == [], amr


def test_rule_inventory_ordered():
    inv = rule_inventory()
    families = [rule.family for rule, _desc in inv]
    assert families == sorted(
        families, key=["temporal", "numerical", "base"].index)
    names = [rule.name for rule, _desc in inv]
    assert len(names) == len(set(names))
