"""Entity/relation linking and KB-specific interval resolution.

Turns a KB-agnostic lambda expression into a grounded one in which
frame predicates carry property bindings and interval predicates are
resolved against the KB's representation (statement qualifiers for
reified facts, date-valued objects otherwise, or entity-level temporal
properties).
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass, replace

from . import lam
from .terms import Iri


class GroundingError(ValueError):
    pass


class UnlinkedEntity(GroundingError):
    def __init__(self, surface, suggestions=()):
        self.surface = surface
        self.suggestions = list(suggestions)
        hint = f" (did you mean: {', '.join(self.suggestions)})" if suggestions else ""
        super().__init__(f"no entity for surface form {surface!r}{hint}")


class UnlinkedRelation(GroundingError):
    def __init__(self, frame, suggestions=()):
        self.frame = frame
        self.suggestions = list(suggestions)
        hint = f" (did you mean: {', '.join(self.suggestions)})" if suggestions else ""
        super().__init__(f"no relation for frame {frame!r}{hint}")


class ProfileMismatch(GroundingError):
    pass


class MissingGold(GroundingError):
    def __init__(self, symbol):
        self.symbol = symbol
        super().__init__(f"gold annotation missing for {symbol!r}")


# ------------------------------------------------------------------ profiles


@dataclass(frozen=True)
class KbProfile:
    name: str
    prefixes: dict
    birthdate_pid: str
    reification: str  # "statement_nodes" | "none"
    entity_interval: tuple  # (start pid, end pid) for entity-level intervals

    def expand(self, curie):
        if curie.startswith("<") and curie.endswith(">"):
            return Iri(curie[1:-1])
        prefix, _, local = curie.partition(":")
        if prefix in self.prefixes and local:
            return Iri(self.prefixes[prefix] + local)
        raise ProfileMismatch(f"unknown prefix in {curie!r} for profile {self.name}")

    def compress(self, iri):
        best = None
        for prefix, base in self.prefixes.items():
            if iri.value.startswith(base) and (best is None or len(base) > len(best[1])):
                best = (prefix, base)
        if best is None:
            return f"<{iri.value}>"
        prefix, base = best
        return f"{prefix}:{iri.value[len(base):]}"

    def direct(self, pid):
        if ":" in pid:
            return self.expand(pid)
        return self.expand(f"wdt:{pid}")

    def statement(self, pid):
        if self.reification != "statement_nodes":
            raise ProfileMismatch(
                f"profile {self.name} has no statement reification for {pid!r}")
        return self.expand(f"p:{pid}"), self.expand(f"ps:{pid}")

    def qualifier(self, pid):
        return self.expand(f"pq:{pid}")


WD = "http://www.wikidata.org/"

WIKIDATA = KbProfile(
    name="wikidata",
    prefixes={
        "wd": WD + "entity/",
        "wdt": WD + "prop/direct/",
        "p": WD + "prop/",
        "ps": WD + "prop/statement/",
        "pq": WD + "prop/qualifier/",
        "xsd": "http://www.w3.org/2001/XMLSchema#",
    },
    birthdate_pid="P569",
    reification="statement_nodes",
    entity_interval=("P580", "P582"),
)

DBPEDIA = KbProfile(
    name="dbpedia",
    prefixes={
        "dbo": "http://dbpedia.org/ontology/",
        "dbr": "http://dbpedia.org/resource/",
        "xsd": "http://www.w3.org/2001/XMLSchema#",
    },
    birthdate_pid="dbo:birthDate",
    reification="none",
    entity_interval=("dbo:startDate", "dbo:endDate"),
)

PROFILES = {"wikidata": WIKIDATA, "dbpedia": DBPEDIA}


# ------------------------------------------------------------------- lexicon


@dataclass(frozen=True)
class PropertyBinding:
    pid: str
    reified: bool = False
    qualifiers: str = "none"  # "start_end" | "point_in_time" | "none"
    inverse: bool = False

    def __post_init__(self):
        if self.qualifiers not in ("start_end", "point_in_time", "none"):
            raise ValueError(f"bad qualifiers {self.qualifiers!r}")
        if self.reified and self.qualifiers == "none":
            raise ValueError(f"reified binding {self.pid} needs temporal qualifiers")


@dataclass(frozen=True)
class EntityEntry:
    iri: str  # curie or absolute
    aliases: tuple = ()
    interval: tuple = None  # optional (start pid, end pid) override


@dataclass
class Lexicon:
    entities: dict  # casefolded surface -> EntityEntry
    relations: dict  # frame name -> PropertyBinding

    @staticmethod
    def from_dict(data):
        entities = {}
        for surface, spec in data.get("entities", {}).items():
            entry = _entity_entry(spec)
            aliases = spec.get("aliases", []) if isinstance(spec, dict) else []
            for key in (surface, *aliases):
                folded = key.casefold()
                if folded in entities and entities[folded] != entry:
                    raise ValueError(f"duplicate surface form {key!r}")
                entities[folded] = entry
        relations = {
            frame: _binding(spec) for frame, spec in data.get("relations", {}).items()
        }
        return Lexicon(entities, relations)

    @staticmethod
    def load(path):
        with open(path) as fh:
            return Lexicon.from_dict(json.load(fh))


def _entity_entry(spec):
    if isinstance(spec, str):
        return EntityEntry(spec)
    interval = None
    if "interval" in spec:
        iv = spec["interval"]
        if "point" in iv:
            interval = (iv["point"], iv["point"])
        else:
            interval = (iv["start"], iv["end"])
    return EntityEntry(spec["iri"], tuple(spec.get("aliases", ())), interval)


def _binding(spec):
    if isinstance(spec, str):
        return PropertyBinding(spec)
    return PropertyBinding(
        pid=spec["pid"],
        reified=spec.get("reified", False),
        qualifiers=spec.get("qualifiers", "none"),
        inverse=spec.get("inverse", False),
    )


# --------------------------------------------------------- grounded algebra


@dataclass(frozen=True)
class GroundedPred:
    binding: PropertyBinding
    subject: object  # lam.Var | Iri
    object: object   # lam.Var | Iri
    statement_var: str = None  # set iff binding.reified
    instance_var: str = None   # the frame's AMR instance variable


@dataclass(frozen=True)
class ReifiedInterval:
    ivar: lam.IntervalVar
    statement_var: str
    start_pid: str
    end_pid: str


@dataclass(frozen=True)
class ValueInterval:
    ivar: lam.IntervalVar
    value_var: str


@dataclass(frozen=True)
class EntityInterval:
    ivar: lam.IntervalVar
    entity: Iri
    start_pid: str
    end_pid: str


@dataclass(frozen=True)
class TeenagerInterval:
    ivar: lam.IntervalVar
    person: object  # Iri | lam.Var
    birthdate_pid: str
    dob_var: str


# ---------------------------------------------------------------- grounding


class _Linker:
    """Lookup pair used by both the lexicon and the gold-annotation path."""

    def __init__(self, entities, relations, kb, gold=False):
        self.entities = entities
        self.relations = relations
        self.kb = kb
        self.gold = gold

    def entity(self, surface):
        key = surface.casefold()
        if key not in self.entities:
            if self.gold:
                raise MissingGold(surface)
            raise UnlinkedEntity(
                surface, difflib.get_close_matches(key, self.entities, n=3))
        return self.entities[key]

    def relation(self, frame):
        if frame not in self.relations:
            if self.gold:
                raise MissingGold(frame)
            raise UnlinkedRelation(
                frame, difflib.get_close_matches(frame, self.relations, n=3))
        return self.relations[frame]


def ground(e, lexicon, kb):
    """Ground a lambda expression with dictionary-based entity/relation linking."""
    linker = _Linker(lexicon.entities, lexicon.relations, kb)
    return _ground(e, linker)


def ground_with_gold(e, gold_entities, gold_relations, kb):
    """Ground using explicit per-question annotation maps (the GT path)."""
    entities = {s.casefold(): _entity_entry(spec) for s, spec in gold_entities.items()}
    relations = {f: _binding(spec) for f, spec in gold_relations.items()}
    linker = _Linker(entities, relations, kb, gold=True)
    return _ground(e, linker)


def _ground(e, linker):
    kb = linker.kb
    bodies = []
    if isinstance(e, lam.BooleanQuery):
        bodies.append(e.body)
    if isinstance(e, (lam.Abstraction,)):
        bodies.append(e.body)
    if isinstance(e, (lam.Count, lam.Min, lam.Max)):
        bodies.append(e.inner.body)
    if isinstance(e, (lam.ArgMin, lam.ArgMax)):
        bodies.extend([e.target.body, e.key.body])

    # first pass: ground frame predicates across all bodies so interval
    # predicates in one body can anchor on facts grounded in another
    env = _Env(linker)
    grounded_terms = [_ground_term(body, env, pass_no=1) for body in bodies]
    # second pass: resolve interval predicates against the collected facts
    grounded_terms = [_ground_term(t, env, pass_no=2) for t in grounded_terms]

    def rebuild_abs(ab, term):
        return lam.Abstraction(ab.bound, term)

    if isinstance(e, lam.BooleanQuery):
        return lam.BooleanQuery(grounded_terms[0])
    if isinstance(e, lam.Abstraction):
        return rebuild_abs(e, grounded_terms[0])
    if isinstance(e, (lam.Count, lam.Min, lam.Max)):
        inner = rebuild_abs(e.inner, grounded_terms[0])
        if isinstance(e, lam.Count):
            return lam.Count(inner)
        return replace(e, inner=inner)
    if isinstance(e, (lam.ArgMin, lam.ArgMax)):
        return replace(e, target=rebuild_abs(e.target, grounded_terms[0]),
                       key=rebuild_abs(e.key, grounded_terms[1]))
    raise TypeError(f"cannot ground {type(e).__name__}")


class _Env:
    def __init__(self, linker):
        self.linker = linker
        self.by_statement = {}  # statement var -> GroundedPred
        self.by_instance = {}   # frame instance var -> GroundedPred
        self.object_vars = set()
        self.entity_entries = {}  # iri value -> EntityEntry


def _resolve_arg(arg, env):
    if isinstance(arg, lam.Const) and isinstance(arg.value, str):
        entry = env.linker.entity(arg.value)
        iri = env.linker.kb.expand(entry.iri) if ":" in entry.iri else Iri(entry.iri)
        env.entity_entries[iri.value] = entry
        return iri
    if isinstance(arg, lam.Const):
        raise GroundingError(f"cannot ground constant {arg.value!r} as an entity")
    return arg


def _ground_frame(p, env):
    kb = env.linker.kb
    binding = env.linker.relation(p.name)
    if binding.reified and kb.reification == "none":
        raise ProfileMismatch(
            f"relation {p.name!r} asks for reification on profile {kb.name}")
    instance = p.args[0]
    if not isinstance(instance, lam.Var):
        raise GroundingError(f"frame {p.name!r} instance must be a variable")
    rest = [_resolve_arg(a, env) for a in p.args[1:]]
    if not rest:
        raise UnlinkedRelation(p.name)
    if len(rest) == 1:
        subject, obj = rest[0], instance
    else:
        subject, obj = rest[0], rest[1]
    if binding.inverse:
        subject, obj = obj, subject
    gp = GroundedPred(
        binding=binding,
        subject=subject,
        object=obj,
        statement_var=instance.name if binding.reified else None,
        instance_var=instance.name,
    )
    if binding.reified:
        env.by_statement[instance.name] = gp
    env.by_instance[instance.name] = gp
    if isinstance(gp.object, lam.Var):
        env.object_vars.add(gp.object.name)
    return gp


def _qualifier_pids(binding):
    if binding.qualifiers == "point_in_time":
        return ("P585", "P585")
    return ("P580", "P582")


def _ground_interval(p, env):
    kb = env.linker.kb
    source = p.source
    if isinstance(source, lam.Const):
        source = _resolve_arg(source, env)
    if isinstance(source, Iri):
        entry = env.entity_entries.get(source.value)
        start, end = (entry.interval if entry is not None and entry.interval
                      else kb.entity_interval)
        return EntityInterval(p.ivar, source, start, end)
    var = source.name
    gp = env.by_statement.get(var)
    if gp is not None:
        start, end = _qualifier_pids(gp.binding)
        return ReifiedInterval(p.ivar, gp.statement_var, start, end)
    gp = env.by_instance.get(var)
    if gp is not None and not gp.binding.reified:
        if not isinstance(gp.object, lam.Var):
            raise GroundingError(
                f"no temporal value variable for interval over {var!r}")
        return ValueInterval(p.ivar, gp.object.name)
    if var in env.object_vars:
        return ValueInterval(p.ivar, var)
    raise GroundingError(f"no temporal anchor for interval over {var!r}")


def _ground_term(term, env, pass_no):
    children = []
    for child in term.children:
        if isinstance(child, lam.Term):
            children.append(_ground_term(child, env, pass_no))
        elif pass_no == 1:
            if isinstance(child, lam.FramePred):
                children.append(_ground_frame(child, env))
            elif isinstance(child, lam.TeenagerPred):
                person = child.person
                if isinstance(person, lam.Const):
                    person = _resolve_arg(person, env)
                children.append(TeenagerInterval(
                    child.ivar, person, env.linker.kb.birthdate_pid,
                    child.ivar.name + "Dob"))
            else:
                children.append(child)
        else:
            if isinstance(child, lam.IntervalPred):
                children.append(_ground_interval(child, env))
            else:
                children.append(child)
    return lam.Term(term.connective, tuple(children))
