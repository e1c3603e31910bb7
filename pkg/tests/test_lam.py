"""Lambda IR: validation, pretty printing, JSON round-trip."""

import pytest

from amr2sparql import lam


def _when_expr():
    er = lam.IntervalVar("er")
    body = lam.conj([
        lam.FramePred("release-01", (lam.Var("r"), lam.Const("Titanic"))),
        lam.IntervalPred(er, lam.Var("r")),
    ])
    return lam.Abstraction((er,), body)


def _teenager_expr():
    eh, ed = lam.IntervalVar("eh"), lam.IntervalVar("ed")
    body = lam.conj([
        lam.FramePred("hold-01", (lam.Var("h"), lam.Var("a"), lam.Const("President"))),
        lam.IntervalPred(eh, lam.Var("h")),
        lam.TeenagerPred(ed, lam.Const("Douglas Bravo")),
        lam.OverlapPred(eh, ed),
    ])
    return lam.Abstraction((lam.Var("a"),), body)


def _argmax_expr():
    ev, en = lam.IntervalVar("ev"), lam.IntervalVar("en")
    target = lam.Abstraction(
        (lam.Var("x"),),
        lam.conj([lam.FramePred("elect-01", (lam.Var("v"), lam.Var("x")))]))
    key = lam.Abstraction(
        (lam.Var("x"), ev),
        lam.conj([lam.IntervalPred(ev, lam.Var("v")),
                  lam.IntervalPred(en, lam.Const("WW2")),
                  lam.BeforePred(ev, en)]))
    return lam.ArgMax(target, key, 0, 1)


ALL_EXPRS = [
    _when_expr(),
    _teenager_expr(),
    _argmax_expr(),
    lam.Count(lam.Abstraction(
        (lam.Var("v0"),),
        lam.conj([lam.FramePred("win-01", (lam.Var("w"), lam.Var("v0")))]))),
    lam.Min(lam.Abstraction(
        (lam.IntervalVar("ev"),),
        lam.conj([lam.IntervalPred(lam.IntervalVar("ev"), lam.Var("v"))])), 0, 1),
    lam.BooleanQuery(lam.conj([
        lam.FramePred("marry-01", (lam.Var("m"), lam.Const("A"), lam.Const("B"))),
    ])),
    lam.Abstraction((lam.Var("x"),), lam.Term("or", (
        lam.FramePred("write-01", (lam.Var("w"), lam.Var("x"))),
        lam.FramePred("compose-01", (lam.Var("c"), lam.Var("x"))),
    ))),
    lam.Abstraction((lam.Var("x"),), lam.conj([
        lam.FramePred("age-01", (lam.Var("g"), lam.Var("x"), lam.Var("vn"))),
        lam.FramePred("age-01", (lam.Var("g2"), lam.Const("Bob"), lam.Var("vm"))),
        lam.CmpPred(lam.Var("vn"), lam.Var("vm"), ">"),
    ])),
    lam.Abstraction((lam.IntervalVar("ev"),), lam.conj([
        lam.IntervalPred(lam.IntervalVar("ev"), lam.Var("v")),
        lam.NowPred(lam.IntervalVar("en")),
        lam.DatePred(lam.IntervalVar("ed"), lam.CalendarDate(1997, 12, 19)),
        lam.OverlapPred(lam.IntervalVar("ev"), lam.IntervalVar("en")),
        lam.AfterPred(lam.IntervalVar("ev"), lam.IntervalVar("ed")),
    ])),
]


@pytest.mark.parametrize("expr", ALL_EXPRS, ids=lambda e: type(e).__name__)
def test_valid_expressions(expr):
    assert lam.validate(expr) == []


@pytest.mark.parametrize("expr", ALL_EXPRS, ids=lambda e: type(e).__name__)
def test_json_round_trip(expr):
    assert lam.loads(lam.dumps(expr)) == expr


def test_interval_accessors():
    iv = lam.IntervalVar("eh")
    assert iv.start == "ehStart"
    assert iv.end == "ehEnd"


def test_validate_empty_term():
    bad = lam.BooleanQuery(lam.conj([]))
    assert any("empty Term" in v for v in lam.validate(bad))


def test_validate_bad_connective():
    bad = lam.BooleanQuery(lam.Term("xor", (lam.NowPred(lam.IntervalVar("en")),)))
    assert any("connective" in v for v in lam.validate(bad))


def test_validate_cmp_op():
    bad = lam.BooleanQuery(lam.conj([
        lam.CmpPred(lam.Var("a"), lam.Var("b"), ">=")]))
    assert any("cmp op" in v for v in lam.validate(bad))


def test_validate_key_bindings():
    target = lam.Abstraction((lam.Var("x"),), lam.conj([
        lam.FramePred("f", (lam.Var("e"), lam.Var("x")))]))
    bad_key = lam.Abstraction((lam.Var("y"), lam.IntervalVar("ev")), lam.conj([
        lam.IntervalPred(lam.IntervalVar("ev"), lam.Var("e"))]))
    bad = lam.ArgMin(target, bad_key, 0, 1)
    assert any("target variable" in v for v in lam.validate(bad))


def test_validate_offset_limit():
    inner = lam.Abstraction((lam.Var("x"),), lam.conj([
        lam.FramePred("f", (lam.Var("e"), lam.Var("x")))]))
    assert any("offset" in v for v in lam.validate(lam.Min(inner, -1, 1)))
    assert any("limit" in v for v in lam.validate(lam.Max(inner, 0, 0)))


def test_validate_namespace_clash():
    bad = lam.BooleanQuery(lam.conj([
        lam.FramePred("f", (lam.Var("e"), lam.Var("ev"))),
        lam.IntervalPred(lam.IntervalVar("ev"), lam.Var("e")),
    ]))
    assert any("clash" in v for v in lam.validate(bad))


def test_free_vars():
    expr = _teenager_expr()
    assert {v.name for v in lam.free_vars(expr)} == {"h"}


def test_pretty_when():
    assert lam.pretty(_when_expr()) == \
        'λer. release-01(r, "Titanic") ∧ interval(er, r)'


def test_pretty_now_and_date():
    expr = lam.BooleanQuery(lam.conj([
        lam.NowPred(lam.IntervalVar("en")),
        lam.DatePred(lam.IntervalVar("ed"), lam.CalendarDate(1997, 12, 19)),
    ]))
    out = lam.pretty(expr)
    assert "interval(en, now())" in out
    assert 'interval(ed, date("19-12-1997"))' in out


def test_pretty_argmax():
    out = lam.pretty(_argmax_expr())
    assert out.startswith("argmax(")
    assert out.endswith(", 0, 1)")
    assert "before(ev, en)" in out


def test_pretty_disjunction():
    expr = ALL_EXPRS[6]
    assert "∨" in lam.pretty(expr)


def test_loads_rejects_bad_payload():
    with pytest.raises((KeyError, ValueError, TypeError)):
        lam.loads('{"expr": "mystery"}')
