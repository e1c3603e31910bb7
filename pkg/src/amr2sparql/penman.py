"""PENMAN notation parser/serializer for AMR graphs.

A graph is a root variable, a variable->node map and an ordered edge
list.  Re-entrant variables (the same variable mentioned twice) yield a
single node with multiple incoming edges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal


class PenmanSyntaxError(ValueError):
    def __init__(self, position, expected):
        self.position = position
        self.expected = expected
        super().__init__(f"at position {position}: expected {expected}")


class DuplicateConceptError(ValueError):
    def __init__(self, var):
        self.var = var
        super().__init__(f"variable {var!r} given two concepts")


_VAR_RE = re.compile(r"[A-Za-z][A-Za-z0-9-]*\d*$")


@dataclass(frozen=True)
class AmrNode:
    var: str
    concept: str


@dataclass(frozen=True)
class NodeRef:
    var: str


@dataclass(frozen=True)
class Constant:
    value: str


@dataclass(frozen=True)
class Number:
    value: Decimal

    def __repr__(self):
        return f"Number({self.value})"


@dataclass
class AmrGraph:
    root: str
    nodes: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)  # (source var, role, target)

    def outgoing(self, var):
        return [(r, t) for (s, r, t) in self.edges if s == var]

    def check(self):
        if self.root not in self.nodes:
            raise ValueError(f"root {self.root!r} not in nodes")
        for s, _r, t in self.edges:
            if s not in self.nodes:
                raise ValueError(f"edge source {s!r} not in nodes")
            if isinstance(t, NodeRef) and t.var not in self.nodes:
                raise ValueError(f"edge target {t.var!r} not in nodes")
        # connectivity from root ignoring direction
        adj = {v: set() for v in self.nodes}
        for s, _r, t in self.edges:
            if isinstance(t, NodeRef):
                adj[s].add(t.var)
                adj[t.var].add(s)
        seen, stack = set(), [self.root]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v] - seen)
        if seen != set(self.nodes):
            raise ValueError(f"disconnected nodes: {set(self.nodes) - seen}")
        return self


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise PenmanSyntaxError(self.pos, repr(ch))
        self.pos += 1

    def atom(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in "() \t\n\r\"/":
            self.pos += 1
        if self.pos == start:
            raise PenmanSyntaxError(start, "an atom")
        return self.text[start:self.pos]

    def string(self):
        # opening quote already peeked
        self.expect('"')
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] != '"':
            self.pos += 1
        if self.pos >= len(self.text):
            raise PenmanSyntaxError(start, "closing quote")
        value = self.text[start:self.pos]
        self.pos += 1
        return value


_NUM_RE = re.compile(r"^-?\d+(\.\d+)?$")


def parse_penman(text):
    """Parse one PENMAN s-expression into an AmrGraph."""
    toks = _Tokens(text)
    g = AmrGraph(root="")
    root = _parse_node(toks, g)
    toks.skip_ws()
    if toks.pos != len(toks.text):
        raise PenmanSyntaxError(toks.pos, "end of input")
    g.root = root
    return g.check()


def _parse_node(toks, g):
    toks.expect("(")
    var = toks.atom()
    if not _VAR_RE.match(var):
        raise PenmanSyntaxError(toks.pos, "a variable name")
    toks.expect("/")
    concept = toks.atom()
    if var in g.nodes:
        if g.nodes[var].concept != concept:
            raise DuplicateConceptError(var)
    else:
        g.nodes[var] = AmrNode(var, concept)
    while toks.peek() == ":":
        toks.pos += 1
        role = toks.atom()
        # reserve the slot first so edges stay in textual order even
        # though nested nodes append their own edges while parsing
        slot = len(g.edges)
        g.edges.append(None)
        g.edges[slot] = (var, role, _parse_target(toks, g))
    toks.expect(")")
    return var


def _parse_target(toks, g):
    ch = toks.peek()
    if ch == "(":
        return NodeRef(_parse_node(toks, g))
    if ch == '"':
        return Constant(toks.string())
    if ch in ("", ")"):
        raise PenmanSyntaxError(toks.pos, "an edge target")
    atom = toks.atom()
    if _NUM_RE.match(atom):
        return Number(Decimal(atom))
    # bare variable: re-entrant reference if it names a node, otherwise a
    # symbol constant (e.g. AMR polarity "-", interrogative markers)
    if _VAR_RE.match(atom):
        return NodeRef(atom) if atom in g.nodes else _forward_ref(toks, g, atom)
    return Constant(atom)


def _forward_ref(toks, g, atom):
    # a bare variable may be defined later in the text; register a
    # placeholder that check() will reject if never defined
    return NodeRef(atom)


def serialize_penman(g):
    """Deterministic PENMAN text; inverse of parse_penman up to layout."""
    seen = set()
    out = _serialize_node(g, g.root, seen)
    return out


def _serialize_node(g, var, seen):
    seen.add(var)
    parts = [f"({var} / {g.nodes[var].concept}"]
    for role, target in g.outgoing(var):
        parts.append(f" :{role} {_serialize_target(g, target, seen)}")
    parts.append(")")
    return "".join(parts)


def _serialize_target(g, target, seen):
    if isinstance(target, NodeRef):
        if target.var in seen:
            return target.var
        return _serialize_node(g, target.var, seen)
    if isinstance(target, Constant):
        return f'"{target.value}"'
    return str(target.value)


def find_unknowns(g):
    """Variables whose concept is exactly "amr-unknown", in document order."""
    order = _document_order(g)
    return [v for v in order if g.nodes[v].concept == "amr-unknown"]


def _document_order(g):
    """Node variables in first-mention order (root first, then edge order)."""
    order = [g.root]
    seen = {g.root}
    for s, _r, t in g.edges:
        for v in (s, t.var if isinstance(t, NodeRef) else None):
            if v is not None and v not in seen:
                seen.add(v)
                order.append(v)
    return order


def structurally_equal(a, b):
    """Equality up to edge order per source node being preserved."""
    return (
        a.root == b.root
        and a.nodes == b.nodes
        and a.edges == b.edges
    )
