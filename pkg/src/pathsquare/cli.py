"""Command-line front end.

Graphs travel as graph6, one per line, on stdin or from a file.  Exit status
is 0 on success, 1 when a check or verification fails (a witness is
printed), and 2 on a usage error (one-line reason on stderr).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import blocks, discharging, formulas, search
from .graph import Graph6Error, graph6_decode, graph6_encode, triangle_count
from .patterns import PatternError, build, contains, parse_pattern

DEFAULT_CACHE = "results"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _pattern(text):
    try:
        return parse_pattern(text)
    except PatternError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_graphs(source, inline=None):
    if inline is not None:
        lines = [inline]
    elif source in (None, "-"):
        lines = sys.stdin.read().splitlines()
    else:
        try:
            lines = Path(source).read_text().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    out = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith(">>graph6<<") and len(line) == 10:
            continue
        try:
            out.append(graph6_decode(line))
        except Graph6Error as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
    return out


def _one_graph(args):
    graphs = _read_graphs(getattr(args, "file", None), getattr(args, "graph6", None))
    if len(graphs) != 1:
        raise UsageError(f"expected exactly one graph, got {len(graphs)}")
    return graphs[0]


def _emit_json(obj):
    print(json.dumps(obj, indent=1, sort_keys=True, default=str))


# -- subcommands -------------------------------------------------------------------


def cmd_table(args):
    if args.lo > args.hi:
        raise UsageError("--from must not exceed --to")
    if args.lo < 1:
        raise UsageError("n must be at least 1")
    rows = [formulas.formula_row(n).as_dict() for n in range(args.lo, args.hi + 1)]
    if args.json:
        _emit_json(rows)
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=formulas.TABLE_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return 0


def cmd_build(args):
    g = build(args.pattern)
    if args.json:
        _emit_json({"pattern": str(args.pattern), "graph6": graph6_encode(g), "n": g.n, "edges": g.num_edges(), "triangles": triangle_count(g)})
    else:
        print(graph6_encode(g))
    return 0


def cmd_check(args):
    pattern = build(args.free)
    results = []
    for g in _read_graphs(args.file):
        witness = contains(g, pattern)
        results.append({"graph6": graph6_encode(g), "free": witness is None, "witness": witness})
    if args.json:
        _emit_json(results)
    else:
        for r in results:
            if r["free"]:
                print("true")
            else:
                print("false\t" + " ".join(map(str, r["witness"])))
    return 0 if all(r["free"] for r in results) else 1


def cmd_count(args):
    rows = [{"graph6": graph6_encode(g), "n": g.n, "edges": g.num_edges(), "triangles": triangle_count(g)} for g in _read_graphs(args.file)]
    if args.json:
        _emit_json(rows)
    else:
        for r in rows:
            print(f"{r['n']}\t{r['edges']}\t{r['triangles']}")
    return 0


def cmd_search(args):
    if args.n < 0 or args.n > 64:
        raise UsageError(f"n must be between 0 and 64, got {args.n}")
    spec = search.SearchSpec(
        args.n,
        args.forbid,
        formulas.Objective(args.objective),
        "lower-bound" if args.lower_bound_only else "exact",
        args.budget_nodes,
        args.budget_seconds,
    )
    cache = None if args.no_cache else args.cache_dir
    report = search.exhaustive_max(spec, jobs=args.jobs, cache_dir=cache, seed=args.seed)
    if args.json:
        _emit_json(report.to_json())
    else:
        for s in report.extremal:
            print(s)
        print(
            f"n={spec.n} {spec.forbidden}-free {spec.objective.value}: optimum {report.optimum} "
            f"({report.completeness}, {len(report.extremal)} extremal, {report.nodes_explored} nodes, {report.wall_time:.2f}s)",
            file=sys.stderr,
        )
    return 0


def cmd_verify(args):
    if args.lo > args.hi:
        raise UsageError("--from must not exceed --to")
    if args.lo < 1 or args.hi > 64:
        raise UsageError("n must lie in 1..64")
    cache = None if args.no_cache else args.cache_dir
    verdicts = search.verify_theorem(
        args.theorem,
        range(args.lo, args.hi + 1),
        jobs=args.jobs,
        cache_dir=cache,
        max_nodes=args.budget_nodes,
        use_constructions=args.seed_constructions,
        seed=args.seed,
    )
    if args.json:
        rows = []
        for v in verdicts:
            d = {k: getattr(v, k) for k in ("theorem", "n", "status", "oracle", "formula", "extremal", "expected_family", "family_match", "witness", "note")}
            d["completeness"] = v.report.completeness if v.report else None
            d["nodes_explored"] = v.report.nodes_explored if v.report else None
            rows.append(d)
        _emit_json(rows)
    else:
        for v in verdicts:
            line = v.summary()
            if v.status == search.FAILED:
                line += f", formula {v.formula}, witness: {v.witness}"
            print(line)
    return 1 if any(v.status == search.FAILED for v in verdicts) else 0


def _block_json(b, col):
    red = sum(1 for e in b.edges if e in col.red)
    return {
        "kind": b.kind.name,
        "label": str(b.kind),
        "vertices": b.vertices,
        "triangles": [list(t) for t in b.triangles],
        "edges": [list(e) for e in b.edges],
        "red_edges": sorted(list(e) for e in b.edges if e in col.red),
        "core": list(b.kind.core),
        "apex": b.kind.apex,
        "red": red,
        "blue": len(b.edges) - red,
    }


def cmd_decompose(args):
    g = _one_graph(args)
    h = blocks.normalize(g)
    try:
        d = blocks.classify_all(h)
    except blocks.ClaimViolation as exc:
        b = exc.block
        print(f"classification failed: {exc}; block vertices {b.vertices}", file=sys.stderr)
        return 1
    col = blocks.color(h, d, repair_star=args.repair_star)
    rep = blocks.audit(g, repair_star=args.repair_star, check_hypothesis=False)
    if args.json:
        _emit_json({
            "n": g.n,
            "blocks": [_block_json(b, col) for b in d.blocks],
            "unassigned_edges": [list(e) for e in sorted(set(g.edges()) - set(h.edges()))],
            "counts": {"triangles": rep.triangles, "e_b": rep.e_b, "e_r": rep.e_r, "k5minus_blocks": rep.k5minus_blocks},
            "checks": rep.checks,
        })
    else:
        for b in d.blocks:
            j = _block_json(b, col)
            print(f"{j['label']}\t{' '.join(map(str, b.vertices))}\t{len(b.triangles)}\t{j['red']}\t{j['blue']}")
        if not rep.ok:
            print("failed checks: " + ", ".join(rep.failures()), file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_discharge(args):
    g = _one_graph(args)
    try:
        ledger = discharging.assign_charges(g)
        rep = discharging.verify_discharge(g, ledger, check_hypothesis=not args.no_hypothesis)
    except blocks.HypothesisViolation as exc:
        raise UsageError(str(exc)) from None
    if args.trace:
        print(discharging.format_trace(ledger))
        return 0 if rep.passed else 1
    if args.json:
        _emit_json({
            "triangles": rep.triangles,
            "edges": rep.edges,
            "min_tri_in": str(rep.min_tri_in) if rep.min_tri_in is not None else None,
            "max_edge_out": str(rep.max_edge_out) if rep.max_edge_out is not None else None,
            "worst_triangle": rep.worst_triangle,
            "worst_edge": rep.worst_edge,
            "conserved": rep.conserved,
            "passed": rep.passed,
        })
    else:
        status = "pass" if rep.passed else "FAIL"
        print(
            f"{status}: t={rep.triangles} e={rep.edges} min_in={rep.min_tri_in} at {rep.worst_triangle} "
            f"max_out={rep.max_edge_out} at {rep.worst_edge} conserved={rep.conserved}"
        )
    return 0 if rep.passed else 1


# -- parser ---------------------------------------------------------------------------


def _global_flags(p, suppress):
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=dflt(False), help="machine-readable output")
    p.add_argument("--seed", type=int, default=dflt(0), help="seed for randomized steps (default 0)")
    p.add_argument("--jobs", type=int, default=dflt(1), help="worker processes for search")
    p.add_argument("--no-cache", action="store_true", default=dflt(False), help="ignore and do not write the results cache")
    p.add_argument("--cache-dir", default=dflt(DEFAULT_CACHE), help="results cache directory")


def make_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="pathsquare", description="Turan-type problems for P6^2 and related patterns.")
    _global_flags(top, suppress=False)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table", parents=[common], help="closed-form values for a range of n")
    p.add_argument("--from", dest="lo", type=int, default=6)
    p.add_argument("--to", dest="hi", type=int, default=64)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("build", parents=[common], help="graph6 of a named graph")
    p.add_argument("pattern", type=_pattern)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", parents=[common], help="test graphs for pattern-freeness")
    p.add_argument("--free", type=_pattern, required=True)
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("count", parents=[common], help="vertices, edges and triangles per graph")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("search", parents=[common], help="exhaustive extremal search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--forbid", type=_pattern, required=True)
    p.add_argument("--objective", choices=[o.value for o in formulas.Objective], default="edges")
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--lower-bound-only", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", parents=[common], help="compare the search with a closed form")
    p.add_argument("theorem", choices=sorted(search.THEOREMS))
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--seed-constructions", action="store_true", help="use the known constructions as the starting incumbent")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", parents=[common], help="triangle blocks, kinds and colouring")
    p.add_argument("graph6", nargs="?")
    p.add_argument("--file")
    p.add_argument("--repair-star", action="store_true", help="add a red leaf edge to star-shaped K4 blocks")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("discharge", parents=[common], help="edge-to-triangle charge check")
    p.add_argument("graph6", nargs="?")
    p.add_argument("--file")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--no-hypothesis", action="store_true", help="skip the P6^2-freeness precondition")
    p.set_defaults(func=cmd_discharge)
    return top


def run(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PatternError, Graph6Error, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


def main() -> None:
    sys.exit(run())
