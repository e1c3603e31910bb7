"""In-memory triple store and query evaluator.

Two evaluators over the same SPARQL subset: `eval_query` does indexed
sequential joins, `eval_bruteforce` enumerates candidate triples per
pattern and intersects.  Both return the same results; the brute-force
one exists as a cross-check.
"""

from __future__ import annotations

import re
from datetime import datetime

from . import sparql
from .terms import (
    XSD_STRING, Iri, Literal, add_duration, compare_values, term_sort_key,
    typed_literal,
)


class ParseError(ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnsupportedFeature(ValueError):
    pass


_NT_TERM_RE = re.compile(
    r"""\s*(?:
        <(?P<iri>[^>]*)>
      | "(?P<lex>[^"]*)"(?:\^\^<(?P<dtype>[^>]*)>)?
    )""",
    re.VERBOSE,
)


def _parse_nt_term(text, pos, lineno):
    m = _NT_TERM_RE.match(text, pos)
    if not m:
        raise ParseError(lineno, f"bad term at {text[pos:pos+30]!r}")
    if m.group("iri") is not None:
        return Iri(m.group("iri")), m.end()
    lex = m.group("lex")
    dtype = m.group("dtype") or XSD_STRING
    try:
        return typed_literal(lex, dtype), m.end()
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from exc


def load_ntriples(path):
    """Read an N-Triples file into a list of (s, p, o) term triples."""
    triples = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            s, pos = _parse_nt_term(line, 0, lineno)
            p, pos = _parse_nt_term(line, pos, lineno)
            o, pos = _parse_nt_term(line, pos, lineno)
            rest = line[pos:].strip()
            if rest != ".":
                raise ParseError(lineno, f"expected terminating '.', got {rest!r}")
            if not isinstance(p, Iri):
                raise ParseError(lineno, "predicate must be an IRI")
            triples.append((s, p, o))
    return triples


class TripleStore:
    """Set of (subject, predicate, object) triples with simple indexes."""

    def __init__(self, triples=()):
        self.triples = set()
        self._by_p = {}
        self._by_sp = {}
        self._by_po = {}
        for t in triples:
            self.add(*t)

    def __len__(self):
        return len(self.triples)

    def add(self, s, p, o):
        t = (s, p, o)
        if t in self.triples:
            return
        self.triples.add(t)
        self._by_p.setdefault(p, []).append(t)
        self._by_sp.setdefault((s, p), []).append(t)
        self._by_po.setdefault((p, o), []).append(t)

    @classmethod
    def from_file(cls, path):
        return cls(load_ntriples(path))

    def match(self, s, p, o):
        """Triples matching a pattern; None is a wildcard position."""
        if p is None:
            candidates = self.triples
        elif s is not None:
            candidates = self._by_sp.get((s, p), [])
        elif o is not None:
            candidates = self._by_po.get((p, o), [])
        else:
            candidates = self._by_p.get(p, [])
        return [t for t in candidates
                if (s is None or t[0] == s) and (o is None or t[2] == o)]


# ------------------------------------------------------------ shared helpers


def _resolve(term, binding):
    if isinstance(term, sparql.VarRef):
        return binding.get(term.name)
    return term


def _eval_expr(expr, binding, now):
    if isinstance(expr, sparql.VarRef):
        return binding.get(expr.name)
    if isinstance(expr, sparql.NowCall):
        return Literal(now, datatype="http://www.w3.org/2001/XMLSchema#dateTime")
    if isinstance(expr, sparql.Lit):
        return expr.term
    if isinstance(expr, sparql.DurAdd):
        base = binding.get(expr.base.name)
        if base is None:
            return None
        if not isinstance(base, Literal) or not isinstance(base.value, datetime):
            return None  # type error -> unbound, solution dropped later
        return Literal(add_duration(base.value, expr.duration), base.datatype)
    raise UnsupportedFeature(f"expression {expr!r}")


def _filter_vars(f):
    out = set()
    for c in f.clauses:
        for side in (c.left, c.right):
            if isinstance(side, sparql.VarRef):
                out.add(side.name)
    return out


def _check_filter(f, binding, now):
    for c in f.clauses:
        left = _eval_expr(c.left, binding, now)
        right = _eval_expr(c.right, binding, now)
        if left is None or right is None:
            return False
        try:
            sign = compare_values(left, right)
        except TypeError:
            return False
        ok = {"<": sign < 0, "<=": sign <= 0, ">": sign > 0,
              ">=": sign >= 0, "=": sign == 0, "!=": sign != 0}[c.op]
        if not ok:
            return False
    return True


def _match_pattern(store, pat, binding):
    """Extend one binding over a triple pattern against the store."""
    s = _resolve(pat.s, binding)
    p = _resolve(pat.p, binding)
    o = _resolve(pat.o, binding)
    for (ts, tp, to) in store.match(s, p, o):
        new = dict(binding)
        consistent = True
        for term, value in ((pat.s, ts), (pat.p, tp), (pat.o, to)):
            if isinstance(term, sparql.VarRef):
                if new.get(term.name, value) != value:
                    consistent = False
                    break
                new[term.name] = value
        if consistent:
            yield new


def _finalize(q, solutions, now):
    """Apply ORDER BY, projection, DISTINCT, OFFSET/LIMIT, aggregation."""
    if q.form == "ASK":
        return bool(solutions)
    if q.aggregate:
        values = {b[q.aggregate.var] for b in solutions if q.aggregate.var in b}
        return [{q.aggregate.alias: Literal(
            len(values), "http://www.w3.org/2001/XMLSchema#integer")}]
    def row_key(b):
        return tuple(term_sort_key(b[v]) if b.get(v) is not None else (2,)
                     for v in q.projection)

    if q.order_by:
        var, direction = q.order_by

        def key(b):
            v = b.get(var)
            # unbound sort keys first, like SPARQL's ORDER BY
            return (v is not None, term_sort_key(v) if v is not None else ())

        # ties broken by the projected row so both evaluators agree
        solutions = sorted(solutions, key=row_key)
        solutions = sorted(solutions, key=key, reverse=(direction == "DESC"))
    rows = []
    seen = set()
    for b in solutions:
        row = tuple((v, b.get(v)) for v in q.projection)
        if row in seen:
            continue
        seen.add(row)
        rows.append(dict(row))
    if not q.order_by:
        rows.sort(key=lambda r: tuple(
            term_sort_key(r[v]) if r[v] is not None else (2,)
            for v in q.projection))
    if q.offset:
        rows = rows[q.offset:]
    if q.limit is not None:
        rows = rows[:q.limit]
    return rows


# ------------------------------------------------------- indexed evaluation


def _eval_group(store, elements, bindings, now):
    deferred = []
    for el in elements:
        if isinstance(el, sparql.TriplePattern):
            bindings = [b2 for b in bindings for b2 in _match_pattern(store, el, b)]
        elif isinstance(el, sparql.Bind):
            out = []
            for b in bindings:
                value = _eval_expr(el.expr, b, now)
                if value is None:
                    continue
                if el.var in b and b[el.var] != value:
                    continue
                b2 = dict(b)
                b2[el.var] = value
                out.append(b2)
            bindings = out
        elif isinstance(el, sparql.Filter):
            if _filter_vars(el) <= _bound_everywhere(bindings):
                bindings = [b for b in bindings if _check_filter(el, b, now)]
            else:
                deferred.append(el)
        elif isinstance(el, sparql.UnionBlock):
            merged = []
            for branch in el.branches:
                merged.extend(_eval_group(store, list(branch), bindings, now))
            bindings = merged
        else:
            raise UnsupportedFeature(f"pattern element {el!r}")
        # retry deferred filters as soon as their variables appear
        still = []
        for f in deferred:
            if _filter_vars(f) <= _bound_everywhere(bindings):
                bindings = [b for b in bindings if _check_filter(f, b, now)]
            else:
                still.append(f)
        deferred = still
    for f in deferred:
        bindings = [b for b in bindings if _check_filter(f, b, now)]
    return bindings


def _bound_everywhere(bindings):
    if not bindings:
        return set()
    common = set(bindings[0])
    for b in bindings[1:]:
        common &= set(b)
    return common


def eval_query(store, q, now=None):
    """Evaluate a query by indexed sequential joins.

    Returns a bool for ASK, else a list of {var: term} rows.
    """
    q.check()
    now = now or datetime.utcnow().replace(microsecond=0)
    solutions = _eval_group(store, q.where, [{}], now)
    return _finalize(q, solutions, now)


# --------------------------------------------------- brute-force evaluation


def _flatten_variants(elements):
    """Expand UNION blocks into a list of alternative flat element lists."""
    variants = [[]]
    for el in elements:
        if isinstance(el, sparql.UnionBlock):
            expanded = []
            for branch in el.branches:
                for sub in _flatten_variants(list(branch)):
                    expanded.extend([v + sub for v in variants])
            variants = expanded
        else:
            variants = [v + [el] for v in variants]
    return variants


def _brute_variant(store, elements, now):
    patterns = [el for el in elements if isinstance(el, sparql.TriplePattern)]
    others = [el for el in elements if not isinstance(el, sparql.TriplePattern)]
    all_triples = sorted(store.triples,
                         key=lambda t: tuple(term_sort_key(x) for x in t))

    solutions = [{}]
    for pat in patterns:
        extended = []
        for b in solutions:
            for triple in all_triples:
                new = dict(b)
                ok = True
                for term, value in zip((pat.s, pat.p, pat.o), triple):
                    if isinstance(term, sparql.VarRef):
                        if new.get(term.name, value) != value:
                            ok = False
                            break
                        new[term.name] = value
                    elif term != value:
                        ok = False
                        break
                if ok:
                    extended.append(new)
        solutions = extended

    # binds in order, then every filter against fully-extended bindings
    for el in others:
        if isinstance(el, sparql.Bind):
            out = []
            for b in solutions:
                value = _eval_expr(el.expr, b, now)
                if value is None or (el.var in b and b[el.var] != value):
                    continue
                b2 = dict(b)
                b2[el.var] = value
                out.append(b2)
            solutions = out
    for el in others:
        if isinstance(el, sparql.Filter):
            solutions = [b for b in solutions if _check_filter(el, b, now)]
    return solutions


def eval_bruteforce(store, q, now=None):
    """Reference evaluator: enumerate every triple assignment per pattern."""
    q.check()
    now = now or datetime.utcnow().replace(microsecond=0)
    solutions = []
    for variant in _flatten_variants(q.where):
        solutions.extend(_brute_variant(store, variant, now))
    return _finalize(q, solutions, now)
