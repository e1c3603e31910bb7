"""SPARQL query AST, emission from grounded lambda expressions,
deterministic text rendering, and a parser for the emitted subset.

The subset is: SELECT DISTINCT / SELECT (COUNT(?x) AS ?c) / ASK, basic
graph patterns, FILTER comparisons joined by &&, BIND of variables,
now() and duration additions, UNION, ORDER BY with LIMIT/OFFSET.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import grounding, lam
from .terms import (
    XSD_DATETIME, XSD_DURATION, Duration, Iri, Literal, parse_duration,
    typed_literal,
)


class EmitError(ValueError):
    pass


class UnemittableConstruct(EmitError):
    pass


class SparqlParseError(ValueError):
    pass


class UnsupportedFeature(ValueError):
    pass


# ----------------------------------------------------------------- AST types


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class NowCall:
    pass


@dataclass(frozen=True)
class Lit:
    term: Literal


@dataclass(frozen=True)
class DurAdd:
    base: VarRef
    duration: Duration


@dataclass(frozen=True)
class Comparison:
    left: object
    op: str  # <= >= < > = !=
    right: object


@dataclass(frozen=True)
class TriplePattern:
    s: object  # VarRef | Iri
    p: object  # Iri
    o: object  # VarRef | Iri | Literal


@dataclass(frozen=True)
class Filter:
    clauses: tuple  # of Comparison, joined by &&


@dataclass(frozen=True)
class Bind:
    expr: object  # VarRef | NowCall | Lit | DurAdd
    var: str


@dataclass(frozen=True)
class UnionBlock:
    branches: tuple  # of tuple of elements


@dataclass(frozen=True)
class CountAgg:
    var: str
    alias: str = "c"


@dataclass
class SparqlQuery:
    form: str  # "SELECT" | "ASK"
    projection: list = field(default_factory=list)  # var names
    aggregate: CountAgg = None
    where: list = field(default_factory=list)
    order_by: tuple = None  # (var name, "ASC" | "DESC")
    limit: int = None
    offset: int = None

    def check(self):
        if not self.where:
            raise EmitError("empty WHERE clause")
        if self.form == "SELECT" and not (self.projection or self.aggregate):
            raise EmitError("SELECT without projection")
        bound = _pattern_vars(self.where)
        for v in self.projection:
            if v not in bound:
                raise EmitError(f"projected variable ?{v} not bound in WHERE")
        return self


def _pattern_vars(elements):
    out = set()
    for el in elements:
        if isinstance(el, TriplePattern):
            for t in (el.s, el.p, el.o):
                if isinstance(t, VarRef):
                    out.add(t.name)
        elif isinstance(el, Bind):
            out.add(el.var)
        elif isinstance(el, UnionBlock):
            for branch in el.branches:
                out |= _pattern_vars(branch)
    return out


# ------------------------------------------------------------------ emission


def emit(e, kb):
    """Translate a grounded lambda expression to a SparqlQuery."""
    if isinstance(e, lam.BooleanQuery):
        return SparqlQuery(form="ASK", where=_emit_term(e.body, kb)).check()
    if isinstance(e, lam.Abstraction):
        return SparqlQuery(
            form="SELECT",
            projection=_projection(e.bound),
            where=_emit_term(e.body, kb),
        ).check()
    if isinstance(e, lam.Count):
        x = e.inner.bound[0].name
        return SparqlQuery(
            form="SELECT",
            aggregate=CountAgg(x),
            where=_emit_term(e.inner.body, kb),
        ).check()
    if isinstance(e, (lam.Min, lam.Max)):
        x = e.inner.bound[0]
        return SparqlQuery(
            form="SELECT",
            projection=_projection(e.inner.bound),
            where=_emit_term(e.inner.body, kb),
            order_by=(_accessor(x), "ASC" if isinstance(e, lam.Min) else "DESC"),
            limit=e.limit,
            offset=e.offset or None,
        ).check()
    if isinstance(e, (lam.ArgMin, lam.ArgMax)):
        key_var = e.key.bound[1]
        return SparqlQuery(
            form="SELECT",
            projection=_projection(e.target.bound),
            where=_emit_term(e.target.body, kb) + _emit_term(e.key.body, kb),
            order_by=(_accessor(key_var),
                      "ASC" if isinstance(e, lam.ArgMin) else "DESC"),
            limit=e.limit,
            offset=e.offset or None,
        ).check()
    raise EmitError(f"cannot emit {type(e).__name__}")


def _projection(bound):
    out = []
    for v in bound:
        if isinstance(v, lam.IntervalVar):
            out.extend([v.start, v.end])
        else:
            out.append(v.name)
    return out


def _accessor(v):
    return v.start if isinstance(v, lam.IntervalVar) else v.name + "Start"


def _term_ref(t):
    if isinstance(t, lam.Var):
        return VarRef(t.name)
    if isinstance(t, Iri):
        return t
    raise EmitError(f"unexpected term {t!r}")


def _emit_term(term, kb):
    elements = []
    for child in term.children:
        if isinstance(child, lam.Term):
            if term.connective == "or" or child.connective == "or":
                pass  # handled below
            elements.extend(_emit_term(child, kb))
        else:
            elements.extend(_emit_pred(child, kb))
    if term.connective == "or":
        branches = []
        for child in term.children:
            if isinstance(child, lam.Term):
                branches.append(tuple(_emit_term(child, kb)))
            else:
                branches.append(tuple(_emit_pred(child, kb)))
        return [UnionBlock(tuple(branches))]
    return elements


def _emit_pred(p, kb):
    if isinstance(p, grounding.GroundedPred):
        s, o = _term_ref(p.subject), _term_ref(p.object)
        if p.binding.reified:
            piri, psiri = kb.statement(p.binding.pid)
            e = VarRef(p.statement_var)
            return [TriplePattern(s, piri, e), TriplePattern(e, psiri, o)]
        return [TriplePattern(s, kb.direct(p.binding.pid), o)]
    if isinstance(p, grounding.ReifiedInterval):
        e = VarRef(p.statement_var)
        return [
            TriplePattern(e, kb.qualifier(p.start_pid), VarRef(p.ivar.start)),
            TriplePattern(e, kb.qualifier(p.end_pid), VarRef(p.ivar.end)),
        ]
    if isinstance(p, grounding.ValueInterval):
        x = VarRef(p.value_var)
        return [Bind(x, p.ivar.start), Bind(x, p.ivar.end)]
    if isinstance(p, grounding.EntityInterval):
        return [
            TriplePattern(p.entity, kb.direct(p.start_pid), VarRef(p.ivar.start)),
            TriplePattern(p.entity, kb.direct(p.end_pid), VarRef(p.ivar.end)),
        ]
    if isinstance(p, grounding.TeenagerInterval):
        dob = VarRef(p.dob_var)
        return [
            TriplePattern(_term_ref(p.person), kb.direct(p.birthdate_pid), dob),
            Bind(DurAdd(dob, Duration(years=13)), p.ivar.start),
            Bind(DurAdd(dob, Duration(years=19)), p.ivar.end),
        ]
    if isinstance(p, lam.NowPred):
        return [Bind(NowCall(), p.ivar.start), Bind(NowCall(), p.ivar.end)]
    if isinstance(p, lam.DatePred):
        d = p.date
        lit = Lit(typed_literal(f"{d.year:04d}-{d.month:02d}-{d.day:02d}T00:00:00Z",
                                XSD_DATETIME))
        return [Bind(lit, p.ivar.start), Bind(lit, p.ivar.end)]
    if isinstance(p, lam.OverlapPred):
        return [Filter((
            Comparison(VarRef(p.i1.start), "<=", VarRef(p.i2.end)),
            Comparison(VarRef(p.i2.start), "<=", VarRef(p.i1.end)),
        ))]
    if isinstance(p, lam.BeforePred):
        return [Filter((Comparison(VarRef(p.i1.end), "<=", VarRef(p.i2.start)),))]
    if isinstance(p, lam.AfterPred):
        return [Filter((Comparison(VarRef(p.i1.start), ">=", VarRef(p.i2.end)),))]
    if isinstance(p, lam.CmpPred):
        return [Filter((Comparison(VarRef(p.left.name), p.op, VarRef(p.right.name)),))]
    if isinstance(p, (lam.CoordinatePred, lam.SouthPred)):
        raise UnemittableConstruct(f"spatial predicate {type(p).__name__}")
    raise EmitError(f"cannot emit predicate {p!r}")


# ----------------------------------------------------------------- rendering


def _render_term(t, kb):
    if isinstance(t, VarRef):
        return "?" + t.name
    if isinstance(t, Iri):
        return kb.compress(t)
    if isinstance(t, Literal):
        dt = t.datatype
        short = "xsd:" + dt.rsplit("#", 1)[-1]
        return f'"{t.lexical()}"^^{short}'
    raise EmitError(f"cannot render {t!r}")


def _render_expr(x, kb):
    if isinstance(x, VarRef):
        return "?" + x.name
    if isinstance(x, NowCall):
        return "now()"
    if isinstance(x, Lit):
        return _render_term(x.term, kb)
    if isinstance(x, DurAdd):
        return (f'(?{x.base.name} + "{x.duration.lexical()}"^^xsd:duration)')
    raise EmitError(f"cannot render {x!r}")


def _render_element(el, kb, indent):
    pad = "  " * indent
    if isinstance(el, TriplePattern):
        return [f"{pad}{_render_term(el.s, kb)} {_render_term(el.p, kb)} "
                f"{_render_term(el.o, kb)}."]
    if isinstance(el, Filter):
        body = " && ".join(
            f"{_render_expr(c.left, kb)}{c.op}{_render_expr(c.right, kb)}"
            for c in el.clauses)
        return [f"{pad}FILTER({body})"]
    if isinstance(el, Bind):
        return [f"{pad}BIND ({_render_expr(el.expr, kb)} AS ?{el.var})"]
    if isinstance(el, UnionBlock):
        chunks = []
        for branch in el.branches:
            lines = [f"{pad}{{"]
            for sub in branch:
                lines.extend(_render_element(sub, kb, indent + 1))
            lines.append(f"{pad}}}")
            chunks.append("\n".join(lines))
        return [f"\n{pad}UNION\n".join(chunks)]
    raise EmitError(f"cannot render element {el!r}")


def _used_prefixes(q, kb):
    used = set()

    def visit_term(t):
        if isinstance(t, Iri):
            compressed = kb.compress(t)
            if not compressed.startswith("<"):
                used.add(compressed.split(":", 1)[0])
        if isinstance(t, (Literal, Lit)):
            used.add("xsd")
        if isinstance(t, DurAdd):
            used.add("xsd")

    def visit(elements):
        for el in elements:
            if isinstance(el, TriplePattern):
                for t in (el.s, el.p, el.o):
                    visit_term(t)
            elif isinstance(el, Bind):
                visit_term(el.expr)
            elif isinstance(el, Filter):
                for c in el.clauses:
                    visit_term(c.left)
                    visit_term(c.right)
            elif isinstance(el, UnionBlock):
                for branch in el.branches:
                    visit(branch)

    visit(q.where)
    return used


def render(q, kb, prefixes=True):
    """Byte-stable text rendering of a query."""
    q.check()
    lines = []
    if prefixes:
        for prefix in sorted(_used_prefixes(q, kb)):
            lines.append(f"PREFIX {prefix}: <{kb.prefixes[prefix]}>")
    if q.form == "ASK":
        head = "ASK WHERE {"
    elif q.aggregate:
        head = f"SELECT (COUNT(?{q.aggregate.var}) AS ?{q.aggregate.alias}) WHERE {{"
    else:
        head = "SELECT DISTINCT " + " ".join(f"?{v}" for v in q.projection) + " WHERE {"
    lines.append(head)
    for el in q.where:
        lines.extend(_render_element(el, kb, 1))
    tail = "}"
    if q.order_by:
        var, direction = q.order_by
        tail += f" ORDER BY (?{var})" if direction == "ASC" else f" ORDER BY DESC(?{var})"
    if q.limit is not None:
        tail += f" LIMIT {q.limit}"
    if q.offset is not None:
        tail += f" OFFSET {q.offset}"
    lines.append(tail)
    return "\n".join(lines)


def to_json(q, kb):
    """JSON AST dump (for pipeline checkpointing); rendering-based."""
    return {
        "form": q.form,
        "projection": list(q.projection),
        "aggregate": ({"var": q.aggregate.var, "alias": q.aggregate.alias}
                      if q.aggregate else None),
        "order_by": list(q.order_by) if q.order_by else None,
        "limit": q.limit,
        "offset": q.offset,
        "text": render(q, kb),
    }


# ------------------------------------------------------------------- parsing


_TOKEN_RE = re.compile(r"""
    \s+
  | (?P<iri><[^>]*>)
  | (?P<string>"[^"]*"(\^\^[A-Za-z][\w-]*:[\w.-]+)?)
  | (?P<var>\?[A-Za-z_][\w]*)
  | (?P<punct>[{}().]|&&|\^\^|<=|>=|!=|[<>=+])
  | (?P<word>[A-Za-z][\w:.-]*|[0-9]+)
""", re.VERBOSE)

_KEYWORDS = {"select", "ask", "where", "distinct", "filter", "bind", "as",
             "order", "by", "desc", "asc", "limit", "offset", "prefix",
             "union", "count"}


class _Parser:
    def __init__(self, text, kb):
        self.kb = kb
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise SparqlParseError(f"cannot tokenize at {text[pos:pos+20]!r}")
            pos = m.end()
            tok = m.group(0).strip()
            if not tok:
                continue
            # a prefixed name may swallow its triple-terminating dot
            if m.group("word") and tok.endswith(".") and len(tok) > 1:
                self.tokens.extend([tok[:-1], "."])
            else:
                self.tokens.append(tok)
        self.i = 0
        self.prefixes = dict(kb.prefixes)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ""

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, *options):
        tok = self.next()
        if tok.lower() not in options:
            raise SparqlParseError(f"expected {options}, got {tok!r}")
        return tok.lower()

    def kw(self, word):
        if self.peek().lower() == word:
            self.i += 1
            return True
        return False

    # -- terms

    def term(self):
        tok = self.next()
        if tok.startswith("?"):
            return VarRef(tok[1:])
        if tok.startswith("<"):
            return Iri(tok[1:-1])
        if tok.startswith('"'):
            return self._literal(tok)
        if ":" in tok:
            return self._expand(tok)
        raise SparqlParseError(f"bad term {tok!r}")

    def _expand(self, curie):
        prefix, _, local = curie.partition(":")
        if prefix not in self.prefixes:
            raise SparqlParseError(f"unknown prefix {prefix!r}")
        return Iri(self.prefixes[prefix] + local)

    def _literal(self, tok):
        m = re.match(r'^"([^"]*)"(?:\^\^([\w:-]+))?$', tok)
        lex, dtype = m.group(1), m.group(2)
        if dtype is None:
            return Literal(lex)
        return typed_literal(lex, self._expand(dtype).value)

    # -- query

    def query(self):
        while self.kw("prefix"):
            decl = self.next()
            iri = self.next()
            self.prefixes[decl.rstrip(":")] = iri[1:-1]
        tok = self.expect("select", "ask")
        q = SparqlQuery(form=tok.upper())
        if tok == "select":
            self.kw("distinct")
            if self.peek() == "(":
                q.aggregate = self._aggregate()
            else:
                while self.peek().startswith("?"):
                    q.projection.append(self.next()[1:])
        self.expect("where")
        q.where = self.group()
        if self.kw("order"):
            self.expect("by")
            direction = "ASC"
            if self.kw("desc"):
                direction = "DESC"
                self.expect("(")
                var = self.next()[1:]
                self.expect(")")
            else:
                self.kw("asc")
                if self.peek() == "(":
                    self.next()
                    var = self.next()[1:]
                    self.expect(")")
                else:
                    var = self.next()[1:]
            q.order_by = (var, direction)
        while True:
            if self.kw("limit"):
                q.limit = int(self.next())
            elif self.kw("offset"):
                q.offset = int(self.next())
            else:
                break
        if self.peek():
            raise SparqlParseError(f"trailing tokens at {self.peek()!r}")
        return q.check()

    def _aggregate(self):
        self.expect("(")
        self.expect("count")
        self.expect("(")
        self.kw("distinct")
        var = self.next()[1:]
        self.expect(")")
        self.expect("as")
        alias = self.next()[1:]
        self.expect(")")
        return CountAgg(var, alias)

    def group(self):
        self.expect("{")
        elements = []
        while self.peek() and self.peek() != "}":
            tok = self.peek().lower()
            if tok == "filter":
                self.next()
                elements.append(self._filter())
            elif tok == "bind":
                self.next()
                elements.append(self._bind())
            elif tok == "{":
                branches = [tuple(self.group())]
                while self.kw("union"):
                    branches.append(tuple(self.group()))
                elements.append(UnionBlock(tuple(branches)))
            else:
                s = self.term()
                p = self.term()
                o = self.term()
                if self.peek() == ".":
                    self.next()
                elements.append(TriplePattern(s, p, o))
        self.expect("}")
        return elements

    def _filter(self):
        self.expect("(")
        clauses = []
        while True:
            left = self._value()
            op = self.next()
            if op not in ("<=", ">=", "<", ">", "=", "!="):
                raise SparqlParseError(f"bad comparison operator {op!r}")
            right = self._value()
            clauses.append(Comparison(left, op, right))
            if self.peek() == "&&":
                self.next()
                continue
            break
        self.expect(")")
        return Filter(tuple(clauses))

    def _value(self):
        tok = self.peek()
        if tok.startswith("?"):
            return VarRef(self.next()[1:])
        if tok.startswith('"'):
            return Lit(self._literal(self.next()))
        raise SparqlParseError(f"bad filter value {tok!r}")

    def _bind(self):
        self.expect("(")
        expr = self._bind_expr()
        self.expect("as")
        var = self.next()[1:]
        self.expect(")")
        return Bind(expr, var)

    def _bind_expr(self):
        tok = self.peek()
        if tok == "(":
            self.next()
            base = self._bind_expr()
            if self.peek() == "+":
                self.next()
                dur = self._literal(self.next())
                if dur.datatype != XSD_DURATION:
                    raise SparqlParseError("expected an xsd:duration on the right of +")
                self.expect(")")
                if not isinstance(base, VarRef):
                    raise SparqlParseError("duration addition needs a variable base")
                return DurAdd(base, dur.value)
            self.expect(")")
            return base
        if tok.lower() == "now":
            self.next()
            self.expect("(")
            self.expect(")")
            return NowCall()
        if tok.startswith("?"):
            return VarRef(self.next()[1:])
        if tok.startswith('"'):
            return Lit(self._literal(self.next()))
        raise SparqlParseError(f"bad BIND expression at {tok!r}")


def parse_sparql(text, kb):
    """Parse the emitted SPARQL subset back into a SparqlQuery."""
    return _Parser(text, kb).query()
