"""KB-agnostic lambda-calculus intermediate representation.

Expressions wrap a Term (AND/OR tree of predicates).  Ordinary
variables range over KB entities/values; interval variables range over
[start, end] time intervals and render through derived accessors
"<name>Start"/"<name>End".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

# ---------------------------------------------------------------- arguments


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return f"Var({self.name})"


@dataclass(frozen=True)
class Const:
    """Surface-form constant awaiting entity linking (or a plain value)."""

    value: object

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True)
class IntervalVar:
    name: str

    @property
    def start(self):
        return self.name + "Start"

    @property
    def end(self):
        return self.name + "End"


@dataclass(frozen=True)
class CalendarDate:
    year: int
    month: int
    day: int


# --------------------------------------------------------------- predicates


@dataclass(frozen=True)
class FramePred:
    name: str
    args: tuple  # of Var | Const


@dataclass(frozen=True)
class IntervalPred:
    ivar: IntervalVar
    source: object  # Var | Const


@dataclass(frozen=True)
class NowPred:
    ivar: IntervalVar


@dataclass(frozen=True)
class TeenagerPred:
    ivar: IntervalVar
    person: object  # Var | Const


@dataclass(frozen=True)
class DatePred:
    ivar: IntervalVar
    date: CalendarDate


@dataclass(frozen=True)
class OverlapPred:
    i1: IntervalVar
    i2: IntervalVar


@dataclass(frozen=True)
class BeforePred:
    i1: IntervalVar
    i2: IntervalVar


@dataclass(frozen=True)
class AfterPred:
    i1: IntervalVar
    i2: IntervalVar


@dataclass(frozen=True)
class CmpPred:
    left: Var
    right: Var
    op: str  # ">" or "<"


@dataclass(frozen=True)
class CoordinatePred:
    cvar: Var
    source: object


@dataclass(frozen=True)
class SouthPred:
    c1: Var
    c2: Var


PREDICATE_TYPES = (
    FramePred, IntervalPred, NowPred, TeenagerPred, DatePred,
    OverlapPred, BeforePred, AfterPred, CmpPred, CoordinatePred, SouthPred,
)


@dataclass(frozen=True)
class Term:
    connective: str  # "and" | "or"
    children: tuple  # of Predicate | Term


def conj(children):
    children = tuple(children)
    if len(children) == 1 and isinstance(children[0], Term):
        return children[0]
    return Term("and", children)


# -------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Abstraction:
    bound: tuple  # of Var | IntervalVar
    body: Term


@dataclass(frozen=True)
class Count:
    inner: Abstraction


@dataclass(frozen=True)
class Min:
    inner: Abstraction
    offset: int = 0
    limit: int = 1


@dataclass(frozen=True)
class Max:
    inner: Abstraction
    offset: int = 0
    limit: int = 1


@dataclass(frozen=True)
class ArgMin:
    target: Abstraction
    key: Abstraction  # binds target var plus one extra (interval/value) var
    offset: int = 0
    limit: int = 1


@dataclass(frozen=True)
class ArgMax:
    target: Abstraction
    key: Abstraction
    offset: int = 0
    limit: int = 1


@dataclass(frozen=True)
class BooleanQuery:
    body: Term


EXPR_TYPES = (Abstraction, Count, Min, Max, ArgMin, ArgMax, BooleanQuery)


# ------------------------------------------------------------- free_vars


def _term_vars(term):
    out = []
    for child in term.children:
        if isinstance(child, Term):
            out.extend(_term_vars(child))
        elif isinstance(child, FramePred):
            out.extend(a for a in child.args if isinstance(a, Var))
        elif isinstance(child, (IntervalPred, TeenagerPred)):
            src = child.source if isinstance(child, IntervalPred) else child.person
            if isinstance(src, Var):
                out.append(src)
        elif isinstance(child, CmpPred):
            out.extend([child.left, child.right])
        elif isinstance(child, CoordinatePred):
            out.append(child.cvar)
            if isinstance(child.source, Var):
                out.append(child.source)
        elif isinstance(child, SouthPred):
            out.extend([child.c1, child.c2])
    return out


def _abstractions(e):
    if isinstance(e, Abstraction):
        return [e]
    if isinstance(e, (Count, Min, Max)):
        return [e.inner]
    if isinstance(e, (ArgMin, ArgMax)):
        return [e.target, e.key]
    return []


def free_vars(e):
    """Unbound ordinary variables of an expression (KB-constant slots)."""
    if isinstance(e, BooleanQuery):
        return set(_term_vars(e.body))
    out = set()
    for ab in _abstractions(e):
        bound = {v.name for v in ab.bound}
        out |= {v for v in _term_vars(ab.body) if v.name not in bound}
    return out


# -------------------------------------------------------------- validate


def _term_intervals(term):
    out = []
    for child in term.children:
        if isinstance(child, Term):
            out.extend(_term_intervals(child))
        elif isinstance(child, (IntervalPred, NowPred, TeenagerPred, DatePred)):
            out.append(child.ivar)
        elif isinstance(child, (OverlapPred, BeforePred, AfterPred)):
            out.extend([child.i1, child.i2])
    return out


def _check_term(term, path, violations):
    if not isinstance(term, Term):
        violations.append(f"{path}: not a Term")
        return
    if term.connective not in ("and", "or"):
        violations.append(f"{path}: bad connective {term.connective!r}")
    if not term.children:
        violations.append(f"{path}: empty Term")
    for i, child in enumerate(term.children):
        if isinstance(child, Term):
            _check_term(child, f"{path}.{i}", violations)
        elif not isinstance(child, PREDICATE_TYPES):
            violations.append(f"{path}.{i}: not a predicate")
        elif isinstance(child, CmpPred) and child.op not in (">", "<"):
            violations.append(f"{path}.{i}: cmp op must be > or <")


def validate(e):
    """Return [] when well-formed, else a list of violation strings."""
    violations = []
    if not isinstance(e, EXPR_TYPES):
        return [f"root: unknown expression type {type(e).__name__}"]
    bodies = []
    if isinstance(e, BooleanQuery):
        bodies.append(("body", e.body))
    for i, ab in enumerate(_abstractions(e)):
        label = ("target", "key")[i] if isinstance(e, (ArgMin, ArgMax)) else "inner"
        if not ab.bound:
            violations.append(f"{label}: abstraction binds no variables")
        bodies.append((label, ab.body))
    for label, body in bodies:
        _check_term(body, label, violations)
    if isinstance(e, (Min, Max, ArgMin, ArgMax)):
        if e.offset < 0:
            violations.append("offset: must be non-negative")
        if e.limit < 1:
            violations.append("limit: must be positive")
    if isinstance(e, (ArgMin, ArgMax)):
        tvars = {v.name for v in e.target.bound}
        kvars = [v.name for v in e.key.bound]
        if len(kvars) != 2 or kvars[0] not in tvars:
            violations.append("key: must bind the target variable plus one more")
    # interval/ordinary namespaces must not collide
    for label, body in bodies:
        ivars = {iv.name for iv in _term_intervals(body)}
        ovars = {v.name for v in _term_vars(body)}
        clash = ivars & ovars
        if clash:
            violations.append(f"{label}: interval/var name clash {sorted(clash)}")
    return violations


# ---------------------------------------------------------------- pretty


def _fmt_arg(a):
    if isinstance(a, (Var, IntervalVar)):
        return a.name
    if isinstance(a, Const):
        return f'"{a.value}"' if isinstance(a.value, str) else str(a.value)
    return str(a)


def _fmt_pred(p):
    if isinstance(p, FramePred):
        return f"{p.name}({', '.join(_fmt_arg(a) for a in p.args)})"
    if isinstance(p, IntervalPred):
        return f"interval({p.ivar.name}, {_fmt_arg(p.source)})"
    if isinstance(p, NowPred):
        return f"interval({p.ivar.name}, now())"
    if isinstance(p, TeenagerPred):
        return f"teenager({p.ivar.name}, {_fmt_arg(p.person)})"
    if isinstance(p, DatePred):
        d = p.date
        return f'interval({p.ivar.name}, date("{d.day:02d}-{d.month:02d}-{d.year:04d}"))'
    if isinstance(p, OverlapPred):
        return f"overlap({p.i1.name}, {p.i2.name})"
    if isinstance(p, BeforePred):
        return f"before({p.i1.name}, {p.i2.name})"
    if isinstance(p, AfterPred):
        return f"after({p.i1.name}, {p.i2.name})"
    if isinstance(p, CmpPred):
        return f"cmp({p.left.name}, {p.right.name}, {p.op})"
    if isinstance(p, CoordinatePred):
        return f"coordinate({p.cvar.name}, {_fmt_arg(p.source)})"
    if isinstance(p, SouthPred):
        return f"south({p.c1.name}, {p.c2.name})"
    # grounded predicate variants from downstream stages: show their repr
    return repr(p)


def _fmt_term(t, top=True):
    sep = " ∧ " if t.connective == "and" else " ∨ "
    parts = []
    for child in t.children:
        if isinstance(child, Term):
            parts.append(f"({_fmt_term(child, top=False)})")
        else:
            parts.append(_fmt_pred(child))
    return sep.join(parts)


def _fmt_abs(ab):
    lams = "".join(f"λ{v.name}. " for v in ab.bound)
    return f"{lams}{_fmt_term(ab.body)}"


def pretty(e):
    """Deterministic text rendering close to the usual logic notation."""
    if isinstance(e, Abstraction):
        return _fmt_abs(e)
    if isinstance(e, Count):
        return f"count({_fmt_abs(e.inner)})"
    if isinstance(e, Min):
        return f"min({_fmt_abs(e.inner)}, {e.offset}, {e.limit})"
    if isinstance(e, Max):
        return f"max({_fmt_abs(e.inner)}, {e.offset}, {e.limit})"
    if isinstance(e, ArgMin):
        return f"argmin({_fmt_abs(e.target)}, {_fmt_abs(e.key)}, {e.offset}, {e.limit})"
    if isinstance(e, ArgMax):
        return f"argmax({_fmt_abs(e.target)}, {_fmt_abs(e.key)}, {e.offset}, {e.limit})"
    if isinstance(e, BooleanQuery):
        return f"ask({_fmt_term(e.body)})"
    raise TypeError(f"not an expression: {e!r}")


# ------------------------------------------------------------------- json


def _arg_json(a):
    if isinstance(a, Var):
        return {"kind": "var", "name": a.name}
    if isinstance(a, IntervalVar):
        return {"kind": "ivar", "name": a.name}
    if isinstance(a, Const):
        return {"kind": "const", "value": a.value}
    raise TypeError(repr(a))


def _pred_json(p):
    if isinstance(p, FramePred):
        return {"pred": "frame", "name": p.name,
                "args": [_arg_json(a) for a in p.args]}
    if isinstance(p, IntervalPred):
        return {"pred": "interval", "ivar": p.ivar.name,
                "source": _arg_json(p.source)}
    if isinstance(p, NowPred):
        return {"pred": "now", "ivar": p.ivar.name}
    if isinstance(p, TeenagerPred):
        return {"pred": "teenager", "ivar": p.ivar.name,
                "person": _arg_json(p.person)}
    if isinstance(p, DatePred):
        return {"pred": "date", "ivar": p.ivar.name,
                "date": [p.date.year, p.date.month, p.date.day]}
    if isinstance(p, OverlapPred):
        return {"pred": "overlap", "i1": p.i1.name, "i2": p.i2.name}
    if isinstance(p, BeforePred):
        return {"pred": "before", "i1": p.i1.name, "i2": p.i2.name}
    if isinstance(p, AfterPred):
        return {"pred": "after", "i1": p.i1.name, "i2": p.i2.name}
    if isinstance(p, CmpPred):
        return {"pred": "cmp", "left": p.left.name, "right": p.right.name,
                "op": p.op}
    if isinstance(p, CoordinatePred):
        return {"pred": "coordinate", "cvar": p.cvar.name,
                "source": _arg_json(p.source)}
    if isinstance(p, SouthPred):
        return {"pred": "south", "c1": p.c1.name, "c2": p.c2.name}
    raise TypeError(repr(p))


def _term_json(t):
    return {
        "connective": t.connective,
        "children": [
            _term_json(c) if isinstance(c, Term) else _pred_json(c)
            for c in t.children
        ],
    }


def _abs_json(ab):
    return {"bound": [_arg_json(v) for v in ab.bound], "body": _term_json(ab.body)}


def to_json(e):
    if isinstance(e, Abstraction):
        return {"expr": "lambda", **_abs_json(e)}
    if isinstance(e, Count):
        return {"expr": "count", "inner": _abs_json(e.inner)}
    if isinstance(e, (Min, Max)):
        tag = "min" if isinstance(e, Min) else "max"
        return {"expr": tag, "inner": _abs_json(e.inner),
                "offset": e.offset, "limit": e.limit}
    if isinstance(e, (ArgMin, ArgMax)):
        tag = "argmin" if isinstance(e, ArgMin) else "argmax"
        return {"expr": tag, "target": _abs_json(e.target),
                "key": _abs_json(e.key), "offset": e.offset, "limit": e.limit}
    if isinstance(e, BooleanQuery):
        return {"expr": "boolean", "body": _term_json(e.body)}
    raise TypeError(repr(e))


def _arg_from_json(d):
    if d["kind"] == "var":
        return Var(d["name"])
    if d["kind"] == "ivar":
        return IntervalVar(d["name"])
    if d["kind"] == "const":
        return Const(d["value"])
    raise ValueError(repr(d))


def _pred_from_json(d):
    p = d["pred"]
    if p == "frame":
        return FramePred(d["name"], tuple(_arg_from_json(a) for a in d["args"]))
    if p == "interval":
        return IntervalPred(IntervalVar(d["ivar"]), _arg_from_json(d["source"]))
    if p == "now":
        return NowPred(IntervalVar(d["ivar"]))
    if p == "teenager":
        return TeenagerPred(IntervalVar(d["ivar"]), _arg_from_json(d["person"]))
    if p == "date":
        return DatePred(IntervalVar(d["ivar"]), CalendarDate(*d["date"]))
    if p == "overlap":
        return OverlapPred(IntervalVar(d["i1"]), IntervalVar(d["i2"]))
    if p == "before":
        return BeforePred(IntervalVar(d["i1"]), IntervalVar(d["i2"]))
    if p == "after":
        return AfterPred(IntervalVar(d["i1"]), IntervalVar(d["i2"]))
    if p == "cmp":
        return CmpPred(Var(d["left"]), Var(d["right"]), d["op"])
    if p == "coordinate":
        return CoordinatePred(Var(d["cvar"]), _arg_from_json(d["source"]))
    if p == "south":
        return SouthPred(Var(d["c1"]), Var(d["c2"]))
    raise ValueError(repr(d))


def _term_from_json(d):
    return Term(d["connective"], tuple(
        _term_from_json(c) if "connective" in c else _pred_from_json(c)
        for c in d["children"]
    ))


def _abs_from_json(d):
    return Abstraction(tuple(_arg_from_json(v) for v in d["bound"]),
                       _term_from_json(d["body"]))


def from_json(d):
    tag = d["expr"]
    if tag == "lambda":
        return _abs_from_json(d)
    if tag == "count":
        return Count(_abs_from_json(d["inner"]))
    if tag in ("min", "max"):
        cls = Min if tag == "min" else Max
        return cls(_abs_from_json(d["inner"]), d["offset"], d["limit"])
    if tag in ("argmin", "argmax"):
        cls = ArgMin if tag == "argmin" else ArgMax
        return cls(_abs_from_json(d["target"]), _abs_from_json(d["key"]),
                   d["offset"], d["limit"])
    if tag == "boolean":
        return BooleanQuery(_term_from_json(d["body"]))
    raise ValueError(f"unknown expression tag {tag!r}")


def dumps(e, **kwargs):
    return json.dumps(to_json(e), **kwargs)


def loads(text):
    return from_json(json.loads(text))
