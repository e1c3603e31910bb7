"""Command-line driver exposing each pipeline stage.

Every subcommand is a pure function of its flags, input files and the
fixed clock, so repeated runs are byte-identical.  Intermediate
representations print as JSON for shell composition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import endpoint, evaluation, grounding, lam, rules, sparql, store
from .penman import NodeRef, parse_penman
from .terms import parse_datetime

CONFIG_ENV = "SYGMA_CONFIG"


def _load_config():
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="amr2sparql",
        description="Compile question AMRs to SPARQL and run them.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, amr=True):
        p.add_argument("--kb", choices=sorted(grounding.PROFILES),
                       help="knowledge-base profile")
        p.add_argument("--lexicon", help="entity/relation lexicon JSON path")
        p.add_argument("--format", choices=("text", "json"),
                       help="output format (default text)")
        p.add_argument("--ordinal-mode", choices=("zero_based", "plus_one"),
                       dest="ordinal_mode", help="ordinal offset convention")
        p.add_argument("--now", help="fixed clock instant (ISO 8601)")
        if amr:
            p.add_argument("--amr", required=True, help="PENMAN AMR file")

    p = sub.add_parser("parse", help="PENMAN text to graph JSON")
    common(p)

    p = sub.add_parser("translate", help="AMR graph to lambda expression")
    common(p)

    p = sub.add_parser("ground", help="lambda expression to grounded form")
    common(p)

    p = sub.add_parser("emit", help="AMR all the way to SPARQL text")
    common(p)

    p = sub.add_parser("run", help="end-to-end: AMR to answers")
    common(p)
    p.add_argument("--store", help="N-Triples fixture path")
    p.add_argument("--endpoint-url", dest="endpoint_url",
                   help="live SPARQL endpoint URL")

    p = sub.add_parser("eval", help="score a JSONL dataset")
    common(p, amr=False)
    p.add_argument("--gold", required=True, help="JSON Lines dataset path")
    p.add_argument("--store", help="N-Triples fixture path")
    p.add_argument("--endpoint-url", dest="endpoint_url",
                   help="live SPARQL endpoint URL")
    p.add_argument("--override",
                   help="comma-separated gold stages (e.g. GT_EL,GT_RL)")
    p.add_argument("--ablation", action="store_true",
                   help="run the cumulative gold-injection chain")

    p = sub.add_parser("categorize", help="complexity category of a query")
    common(p, amr=False)
    p.add_argument("--sparql", required=True, help="SPARQL query file")

    return parser


def _merged(args, config):
    def pick(key, default=None):
        value = getattr(args, key, None)
        if value is not None:
            return value
        return config.get(key, default)

    return pick


def _profile(pick):
    name = pick("kb", "wikidata")
    if name not in grounding.PROFILES:
        raise grounding.ProfileMismatch(f"unknown kb profile {name!r}")
    return grounding.PROFILES[name]


def _lexicon(pick):
    path = pick("lexicon")
    if not path:
        raise ValueError("a lexicon is required (--lexicon or config)")
    return grounding.Lexicon.load(path)


def _context(pick, args):
    kb = _profile(pick)
    store_path = pick("store")
    endpoint_url = pick("endpoint_url")
    if not endpoint_url:
        endpoint_url = (pick("endpoint") or {}).get("url")
    if store_path and endpoint_url:
        raise ValueError("choose one of --store and --endpoint-url, not both")
    if not store_path and not endpoint_url:
        raise ValueError("execution needs --store or --endpoint-url")
    now_text = pick("now")
    ctx = evaluation.PipelineContext(
        kb=kb,
        lexicon=_lexicon(pick) if pick("lexicon") else None,
        now=parse_datetime(now_text) if now_text else None,
        ordinal_offset_mode=pick("ordinal_mode", "zero_based"),
    )
    if store_path:
        ctx.store = store.TripleStore.from_file(store_path)
    else:
        cfg = endpoint.EndpointConfig(url=endpoint_url)
        client = endpoint.EndpointClient(cfg)
        ctx.executor = client.execute
    return ctx


def _graph_json(g):
    def target(t):
        if isinstance(t, NodeRef):
            return {"kind": "ref", "var": t.var}
        if hasattr(t, "value"):
            return {"kind": type(t).__name__.lower(), "value": str(t.value)}
        raise TypeError(repr(t))

    return {
        "root": g.root,
        "nodes": {v: n.concept for v, n in sorted(g.nodes.items())},
        "edges": [{"source": s, "role": r, "target": target(t)}
                  for s, r, t in g.edges],
    }


def _print(payload, fmt, text_view=None):
    if fmt == "json" or text_view is None:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True,
                                    ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text_view + "\n")


def _translate(args, pick):
    with open(args.amr, encoding="utf-8") as handle:
        g = parse_penman(handle.read())
    return rules.translate(g, ordinal_offset_mode=pick("ordinal_mode", "zero_based"))


def _ground(args, pick):
    expr, applied = _translate(args, pick)
    kb = _profile(pick)
    grounded = grounding.ground(expr, _lexicon(pick), kb)
    return grounded, applied, kb


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config()
        pick = _merged(args, config)
        fmt = pick("format", "text")

        if args.command == "parse":
            with open(args.amr, encoding="utf-8") as handle:
                g = parse_penman(handle.read())
            _print(_graph_json(g), fmt)
        elif args.command == "translate":
            expr, applied = _translate(args, pick)
            payload = {"lambda": lam.to_json(expr),
                       "pretty": lam.pretty(expr),
                       "rules": [str(r) for r in applied]}
            _print(payload, fmt, text_view=lam.pretty(expr))
        elif args.command == "ground":
            grounded, applied, _kb = _ground(args, pick)
            payload = {"grounded": lam.pretty(grounded),
                       "rules": [str(r) for r in applied]}
            _print(payload, fmt, text_view=lam.pretty(grounded))
        elif args.command == "emit":
            grounded, _applied, kb = _ground(args, pick)
            q = sparql.emit(grounded, kb)
            text = sparql.render(q, kb)
            _print(sparql.to_json(q, kb), fmt, text_view=text)
        elif args.command == "run":
            ctx = _context(pick, args)
            expr, _applied = _translate(args, pick)
            grounded = grounding.ground(expr, ctx.lexicon, ctx.kb)
            q = sparql.emit(grounded, ctx.kb)
            answers = evaluation._execute(q, ctx)
            _print({"answers": sorted(answers)}, "json")
        elif args.command == "eval":
            ctx = _context(pick, args)
            records = evaluation.load_dataset(args.gold)
            if args.ablation:
                stages = evaluation.ablation(records, ctx)
                payload = {label: report.to_json() for label, report in stages}
                text_view = "\n\n".join(
                    f"[{label}]\n{report.to_text()}" for label, report in stages)
                _print(payload, fmt, text_view=text_view)
            else:
                overrides = tuple(
                    s for s in (args.override or "").split(",") if s)
                report = evaluation.evaluate(records, ctx, overrides)
                _print(report.to_json(), fmt, text_view=report.to_text())
        elif args.command == "categorize":
            kb = _profile(pick)
            with open(args.sparql, encoding="utf-8") as handle:
                q = sparql.parse_sparql(handle.read(), kb)
            category = evaluation.categorize(q)
            _print({"category": category}, fmt, text_view=category)
        return 0
    except (OSError, ValueError, KeyError, endpoint.EndpointError) as exc:
        sys.stdout.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)},
            sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
