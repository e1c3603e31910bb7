"""Rule engine translating AMR graphs to lambda expressions.

Three rule families are applied with most-specific-first precedence:
temporal, then numerical, then base conjunction/projection.  Inverse
roles (":argN-of") are normalized to forward edges before matching, so
patterns written either way translate identically.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lam
from .penman import Constant, NodeRef, Number, _document_order, find_unknowns


@dataclass(frozen=True)
class RuleId:
    family: str  # "base" | "numerical" | "temporal"
    name: str

    def __str__(self):
        return self.name


class UnsupportedConstruct(ValueError):
    def __init__(self, node, concept):
        self.node = node
        self.concept = concept
        super().__init__(f"no rule for construct {concept!r} at node {node!r}")


BEFORE_CONCEPTS = frozenset({"before", "prior", "precede", "precede-01"})
AFTER_CONCEPTS = frozenset({"after", "follow", "follow-01"})
TEENAGER_CONCEPTS = frozenset({"teenager"})
SPATIAL_MODS = frozenset({"south", "north", "east", "west"})
CONNECTIVES = frozenset({"and", "or"})
SKIP_ROLES = frozenset({"name", "wiki"})


@dataclass(frozen=True)
class _Edge:
    idx: int
    src: str
    role: str
    target: object  # NodeRef | Constant | Number


def _effective_edges(g):
    """Graph edges with ":R-of" roles inverted, in document order."""
    out = []
    for idx, (src, role, target) in enumerate(g.edges):
        if role.endswith("-of") and isinstance(target, NodeRef):
            out.append(_Edge(idx, target.var, role[:-3], NodeRef(src)))
        else:
            out.append(_Edge(idx, src, role, target))
    return out


class _Ctx:
    def __init__(self, g):
        self.g = g
        self.edges = _effective_edges(g)
        self.by_src = {}
        for e in self.edges:
            self.by_src.setdefault(e.src, []).append(e)
        self.consumed_edges = set()
        self.consumed_nodes = set()
        self.visited = set()

    def concept(self, var):
        return self.g.nodes[var].concept

    def outgoing(self, var):
        return [e for e in self.by_src.get(var, ())
                if e.idx not in self.consumed_edges]

    def named_child(self, var, role):
        for e in self.outgoing(var):
            if e.role == role and isinstance(e.target, NodeRef):
                return e
        return None

    def entity_surface(self, var):
        """Surface form for a node with a :name subgraph, else None."""
        for e in self.by_src.get(var, ()):
            if e.role == "name" and isinstance(e.target, NodeRef):
                parts = []
                for ne in self.by_src.get(e.target.var, ()):
                    if ne.role.startswith("op") and isinstance(ne.target, Constant):
                        parts.append(ne.target.value)
                if parts:
                    return " ".join(parts)
        return None


def _ivar(var):
    return lam.IntervalVar("e" + var)


def _arg(ctx, var):
    surface = ctx.entity_surface(var)
    if surface is not None:
        return lam.Const(surface)
    return lam.Var(var)


def _psi(ctx, var):
    """Base-rule conjunction for the subtree rooted at var."""
    if var in ctx.visited or var in ctx.consumed_nodes:
        return []
    ctx.visited.add(var)
    concept = ctx.concept(var)
    if concept in ("amr-unknown", "name"):
        # unknowns carry no predicate of their own but may still have
        # structure hanging off them (e.g. inverse-role parents)
        preds = []
        for e in ctx.outgoing(var):
            if isinstance(e.target, NodeRef):
                preds.extend(_psi(ctx, e.target.var))
        return preds
    if ctx.entity_surface(var) is not None:
        return []
    if concept in CONNECTIVES:
        groups = []
        for e in ctx.outgoing(var):
            if e.role.startswith("op") and isinstance(e.target, NodeRef):
                group = _psi(ctx, e.target.var)
                if group:
                    groups.append(group)
        if concept == "and" or len(groups) < 2:
            return [p for group in groups for p in group]
        return [lam.Term("or", tuple(lam.conj(group) for group in groups))]
    args = []
    subs = []
    for e in sorted(ctx.outgoing(var), key=lambda e: (e.role, e.idx)):
        if e.role in SKIP_ROLES:
            continue
        if isinstance(e.target, (Constant, Number)):
            args.append(lam.Const(_const_value(e.target)))
        else:
            child = e.target.var
            if child in ctx.consumed_nodes:
                continue
            if e.role in ("mod", "domain") and ctx.concept(child) == "amr-unknown":
                # a "which X ..." determiner: marks var itself as the answer
                continue
            args.append(_arg(ctx, child))
    for e in ctx.outgoing(var):
        if isinstance(e.target, NodeRef) and e.role not in SKIP_ROLES:
            subs.extend(_psi(ctx, e.target.var))
    preds = []
    if args:
        preds.append(lam.FramePred(concept, (lam.Var(var), *args)))
    return preds + subs


def _const_value(target):
    if isinstance(target, Constant):
        return target.value
    value = target.value
    return int(value) if value == value.to_integral_value() else float(value)


def _consume_subtree(ctx, var):
    """Mark var and everything below it consumed (original edge direction)."""
    stack = [var]
    while stack:
        v = stack.pop()
        if v in ctx.consumed_nodes:
            continue
        ctx.consumed_nodes.add(v)
        for s, _r, t in ctx.g.edges:
            if s == v and isinstance(t, NodeRef):
                stack.append(t.var)


def _check_spatial(ctx):
    for var, node in ctx.g.nodes.items():
        if node.concept == "be-located-at-91":
            for e in ctx.by_src.get(var, ()):
                if e.role == "mod" and isinstance(e.target, NodeRef):
                    mod = ctx.concept(e.target.var)
                    if mod in SPATIAL_MODS:
                        raise UnsupportedConstruct(var, f"be-located-at-91 :mod({mod})")


def translate(g, ordinal_offset_mode="zero_based"):
    """Map an AMR graph to (LambdaExpr, list of applied RuleIds)."""
    if ordinal_offset_mode not in ("zero_based", "plus_one"):
        raise ValueError(f"bad ordinal_offset_mode {ordinal_offset_mode!r}")
    ctx = _Ctx(g)
    _check_spatial(ctx)
    unknowns = find_unknowns(g)
    applied = []
    conjuncts = []   # predicates appended after the base body
    wrapper = None   # one outer expression-shaping rule
    projection = None

    # ---- temporal family -------------------------------------------------
    for e in list(ctx.edges):
        if e.idx in ctx.consumed_edges or e.src in ctx.consumed_nodes:
            continue
        if e.role == "time" and isinstance(e.target, NodeRef):
            t = e.target.var
            tc = ctx.concept(t)
            ev = _ivar(e.src)
            if tc == "amr-unknown":
                if projection is None:
                    ctx.consumed_edges.add(e.idx)
                    ctx.consumed_nodes.add(t)
                    projection = ev
                    conjuncts.append(lam.IntervalPred(ev, lam.Var(e.src)))
                    applied.append(RuleId("temporal", "temporal.when"))
            elif tc in BEFORE_CONCEPTS or tc in AFTER_CONCEPTS:
                nested = ctx.named_child(t, "op1")
                if nested is None or wrapper is not None:
                    continue
                ctx.consumed_edges.add(e.idx)
                ctx.consumed_nodes.add(t)
                n = nested.target.var
                en = _ivar(n)
                key_ctx_visited = set(ctx.visited)
                psi_n = _psi(ctx, n)
                _consume_subtree(ctx, n)
                ctx.visited = key_ctx_visited
                key = (*psi_n,
                       lam.IntervalPred(ev, lam.Var(e.src)),
                       lam.IntervalPred(en, _arg(ctx, n)),
                       (lam.BeforePred if tc in BEFORE_CONCEPTS else lam.AfterPred)(ev, en))
                cls = lam.ArgMax if tc in BEFORE_CONCEPTS else lam.ArgMin
                name = "temporal.before" if tc in BEFORE_CONCEPTS else "temporal.after"
                wrapper = ("argkey", cls, key, ev, 0, 1)
                applied.append(RuleId("temporal", name))
            elif tc == "now":
                ctx.consumed_edges.add(e.idx)
                ctx.consumed_nodes.add(t)
                en = _ivar(t)
                conjuncts.extend([
                    lam.IntervalPred(ev, lam.Var(e.src)),
                    lam.NowPred(en),
                    lam.OverlapPred(ev, en),
                ])
                applied.append(RuleId("temporal", "temporal.now"))
            elif tc == "date-entity":
                ctx.consumed_edges.add(e.idx)
                parts = {}
                for de in ctx.by_src.get(t, ()):
                    if de.role in ("year", "month", "day") and isinstance(de.target, Number):
                        parts[de.role] = int(de.target.value)
                ctx.consumed_nodes.add(t)
                date = lam.CalendarDate(parts.get("year", 1), parts.get("month", 1),
                                        parts.get("day", 1))
                en = _ivar(t)
                conjuncts.extend([
                    lam.DatePred(en, date),
                    lam.IntervalPred(ev, lam.Var(e.src)),
                    lam.OverlapPred(ev, en),
                ])
                applied.append(RuleId("temporal", "temporal.date"))
            elif tc in TEENAGER_CONCEPTS:
                dom = ctx.named_child(t, "domain")
                if dom is None:
                    continue
                ctx.consumed_edges.add(e.idx)
                ctx.consumed_edges.add(dom.idx)
                ctx.consumed_nodes.add(t)
                n = dom.target.var
                en = _ivar(n)
                person = _arg(ctx, n)
                if isinstance(person, lam.Const):
                    ctx.consumed_nodes.add(n)
                conjuncts.extend([
                    lam.IntervalPred(ev, lam.Var(e.src)),
                    lam.TeenagerPred(en, person),
                    lam.OverlapPred(ev, en),
                ])
                applied.append(RuleId("temporal", "temporal.teenager"))
            else:
                # plain nested event: overlap of the two intervals
                ctx.consumed_edges.add(e.idx)
                n = t
                en = _ivar(n)
                psi_n = _psi(ctx, n)
                conjuncts.extend([
                    *psi_n,
                    lam.IntervalPred(ev, lam.Var(e.src)),
                    lam.IntervalPred(en, _arg(ctx, n)),
                    lam.OverlapPred(ev, en),
                ])
                if isinstance(_arg(ctx, n), lam.Const):
                    ctx.consumed_nodes.add(n)
                applied.append(RuleId("temporal", "temporal.overlap"))
        elif e.role == "ord" and isinstance(e.target, NodeRef):
            o = e.target.var
            if ctx.concept(o) != "ordinal-entity" or wrapper is not None:
                continue
            value = None
            for oe in ctx.by_src.get(o, ()):
                if oe.role == "value" and isinstance(oe.target, Number):
                    value = int(oe.target.value)
            if value is None:
                continue
            ctx.consumed_edges.add(e.idx)
            ctx.consumed_nodes.add(o)
            ev = _ivar(e.src)
            key = (lam.IntervalPred(ev, lam.Var(e.src)),)
            if value == -1:
                wrapper = ("argkey", lam.ArgMax, key, ev, 0, 1)
                applied.append(RuleId("temporal", "temporal.ordinal.last"))
            else:
                offset = value - 1 if ordinal_offset_mode == "zero_based" else value + 1
                wrapper = ("argkey", lam.ArgMin, key, ev, offset, 1)
                applied.append(RuleId("temporal", "temporal.ordinal"))

    # ---- numerical family ------------------------------------------------
    if wrapper is None:
        wrapper, new_rules = _match_numerical(ctx, unknowns, projection)
        applied.extend(new_rules)
        if wrapper and wrapper[0] == "cmp":
            conjuncts.extend(wrapper[1])
            wrapper = None

    # ---- base body ---------------------------------------------------------
    body = _psi(ctx, g.root)
    for var in _document_order(g):
        if var not in ctx.visited and var not in ctx.consumed_nodes:
            body.extend(_psi(ctx, var))
    body.extend(conjuncts)
    if not body:
        body = [lam.FramePred(g.nodes[g.root].concept, (lam.Var(g.root),))]

    # ---- assemble ----------------------------------------------------------
    if projection is None and unknowns:
        u = unknowns[0]
        # "which X ..." attaches the unknown under :mod/:domain; the
        # constrained parent node is the variable being asked for
        parent = next((e.src for e in ctx.edges
                       if e.idx not in ctx.consumed_edges
                       and e.role in ("mod", "domain")
                       and isinstance(e.target, NodeRef) and e.target.var == u),
                      None)
        if parent is None:
            # the reverse attachment: (u / amr-unknown :domain (m / ...))
            parent = next((e.target.var for e in ctx.edges
                           if e.idx not in ctx.consumed_edges and e.src == u
                           and e.role == "domain" and isinstance(e.target, NodeRef)),
                          None)
        projection = lam.Var(parent if parent is not None else u)

    if wrapper is not None and wrapper[0] == "count":
        _tag, v0 = wrapper
        expr = lam.Count(lam.Abstraction((lam.Var(v0),), lam.conj(body)))
    elif projection is None:
        expr = lam.BooleanQuery(lam.conj(body))
        applied.append(RuleId("base", "base.boolean"))
    else:
        inner = lam.Abstraction((projection,), lam.conj(body))
        if wrapper is None:
            expr = inner
            applied.append(RuleId("base", "base.projection"))
        elif wrapper[0] == "minmax":
            _tag, cls = wrapper
            expr = cls(inner, 0, 1)
        elif wrapper[0] == "argkey":
            _tag, cls, key, kvar, offset, limit = wrapper
            key_abs = lam.Abstraction((projection, kvar), lam.conj(key))
            expr = cls(inner, key_abs, offset, limit)
        elif wrapper[0] == "argquant":
            _tag, cls, v0, vn, key = wrapper
            target = lam.Abstraction((lam.Var(v0),), lam.conj(body))
            key_abs = lam.Abstraction((lam.Var(v0), lam.Var(vn)), lam.conj(key))
            expr = cls(target, key_abs, 0, 1)
        else:  # pragma: no cover
            raise AssertionError(wrapper)

    return expr, applied


def _match_numerical(ctx, unknowns, projection):
    """Return (wrapper, applied) for the first numerical match, if any."""
    # count: ":quant(a/amr-unknown)"
    for e in ctx.edges:
        if e.idx in ctx.consumed_edges:
            continue
        if e.role == "quant" and isinstance(e.target, NodeRef) \
                and ctx.concept(e.target.var) == "amr-unknown":
            ctx.consumed_edges.add(e.idx)
            ctx.consumed_nodes.add(e.target.var)
            return ("count", e.src), [RuleId("numerical", "numerical.count")]
    # first / last: ":mod(f/first)" with an unknown to project
    if unknowns or projection is not None:
        for e in ctx.edges:
            if e.idx in ctx.consumed_edges:
                continue
            if e.role == "mod" and isinstance(e.target, NodeRef) \
                    and ctx.concept(e.target.var) in ("first", "last"):
                which = ctx.concept(e.target.var)
                ctx.consumed_edges.add(e.idx)
                ctx.consumed_nodes.add(e.target.var)
                cls = lam.Min if which == "first" else lam.Max
                return ("minmax", cls), [RuleId("numerical", f"numerical.{which}")]
    # most / least via have-quant-91
    for var, node in ctx.g.nodes.items():
        if node.concept != "have-quant-91" or var in ctx.consumed_nodes:
            continue
        vn_edge = next((e for e in ctx.by_src.get(var, ()) if e.role == "arg1"
                        and isinstance(e.target, NodeRef)), None)
        deg_edge = next((e for e in ctx.by_src.get(var, ()) if e.role == "arg3"
                         and isinstance(e.target, NodeRef)
                         and ctx.concept(e.target.var) in ("most", "least")), None)
        if vn_edge is None or deg_edge is None:
            continue
        v0 = _find_mod_unknown(ctx)
        if v0 is None:
            continue
        which = ctx.concept(deg_edge.target.var)
        ctx.consumed_nodes.update({var, deg_edge.target.var})
        vn = vn_edge.target.var
        saved = set(ctx.visited)
        key = _psi(ctx, vn)
        ctx.visited = saved
        if not key:
            key = [lam.FramePred(ctx.concept(vn), (lam.Var(vn),))]
        cls = lam.ArgMax if which == "most" else lam.ArgMin
        name = "numerical.most" if which == "most" else "numerical.least"
        return ("argquant", cls, v0, vn, tuple(key)), [RuleId("numerical", name)]
    # comparative via have-degree-91
    for var, node in ctx.g.nodes.items():
        if node.concept != "have-degree-91" or var in ctx.consumed_nodes:
            continue
        vn_edge = next((e for e in ctx.by_src.get(var, ()) if e.role == "arg1"
                        and isinstance(e.target, NodeRef)), None)
        deg_edge = next((e for e in ctx.by_src.get(var, ()) if e.role == "arg3"
                         and isinstance(e.target, NodeRef)
                         and ctx.concept(e.target.var) in ("more", "less")), None)
        vm_edge = next((e for e in ctx.by_src.get(var, ()) if e.role == "arg4"
                        and isinstance(e.target, NodeRef)), None)
        if vn_edge is None or deg_edge is None or vm_edge is None:
            continue
        which = ctx.concept(deg_edge.target.var)
        ctx.consumed_nodes.update({var, deg_edge.target.var})
        vn, vm = vn_edge.target.var, vm_edge.target.var
        # the comparison value of vm comes from the frame hanging off it
        nested = next((e for e in ctx.edges if e.idx not in ctx.consumed_edges
                       and isinstance(e.target, NodeRef) and e.target.var == vm
                       and e.src not in (var,)), None)
        preds = []
        if nested is not None:
            preds.extend(_psi(ctx, nested.src))
        op = ">" if which == "more" else "<"
        preds.append(lam.CmpPred(lam.Var(vn), lam.Var(vm), op))
        name = "numerical.more" if which == "more" else "numerical.less"
        return ("cmp", tuple(preds)), [RuleId("numerical", name)]
    return None, []


def _find_mod_unknown(ctx):
    for e in ctx.edges:
        if e.idx in ctx.consumed_edges:
            continue
        if e.role == "mod" and isinstance(e.target, NodeRef) \
                and ctx.concept(e.target.var) == "amr-unknown":
            ctx.consumed_edges.add(e.idx)
            ctx.consumed_nodes.add(e.target.var)
            return e.src
    return None


_INVENTORY = [
    (RuleId("temporal", "temporal.when"),
     ":time(a/amr-unknown) -> project the event interval"),
    (RuleId("temporal", "temporal.before"),
     ":time(b/before :op1(n)) -> argmax over intervals before n"),
    (RuleId("temporal", "temporal.after"),
     ":time(b/after :op1(n)) -> argmin over intervals after n"),
    (RuleId("temporal", "temporal.overlap"),
     ":time(n/nested-frame) -> overlap of the two event intervals"),
    (RuleId("temporal", "temporal.ordinal"),
     ":ord(o/ordinal-entity :value x) -> argmin with offset from x"),
    (RuleId("temporal", "temporal.ordinal.last"),
     ":ord(o/ordinal-entity :value -1) -> argmax, offset 0"),
    (RuleId("temporal", "temporal.now"),
     ":time(n/now) -> overlap with the current instant"),
    (RuleId("temporal", "temporal.date"),
     ":time(d/date-entity ...) -> overlap with the given date"),
    (RuleId("temporal", "temporal.teenager"),
     ":time(t/teenager :domain(n)) -> overlap with n's teenage interval"),
    (RuleId("numerical", "numerical.count"),
     ":quant(a/amr-unknown) -> count"),
    (RuleId("numerical", "numerical.first"), ":mod(f/first) -> min, offset 0"),
    (RuleId("numerical", "numerical.last"), ":mod(f/last) -> max, offset 0"),
    (RuleId("numerical", "numerical.most"),
     "have-quant-91 :arg3(most) -> argmax over the quantity"),
    (RuleId("numerical", "numerical.least"),
     "have-quant-91 :arg3(least) -> argmin over the quantity"),
    (RuleId("numerical", "numerical.more"),
     "have-degree-91 :arg3(more) -> cmp(vn, vm, >)"),
    (RuleId("numerical", "numerical.less"),
     "have-degree-91 :arg3(less) -> cmp(vn, vm, <)"),
    (RuleId("base", "base.projection"), "amr-unknown -> lambda projection"),
    (RuleId("base", "base.boolean"), "no amr-unknown -> boolean query"),
]


def rule_inventory():
    """Ordered rule inventory (precedence order, most specific first)."""
    return list(_INVENTORY)
