"""Command-line front end.

Exit status: 0 success, 1 domain verdict failure (infeasible, violated,
inconsistent), 2 input error, 64 usage error, 66 unreadable file.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Optional

from .errors import InputError, SpeiserError

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT, EXIT_USAGE, EXIT_FILE = 0, 1, 2, 64, 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, default=str)


# -- loading -------------------------------------------------------------------

def _graph(path):
    from .corpus import load_graph
    return load_graph(path)


def _labels(path):
    from .corpus import load_labelling
    return load_labelling(path) if path else None


def _tgraph(path, labels_path=None, blue_face=None):
    """A t-graph file, or a Speiser graph file turned into its tessellation."""
    from .corpus import _read_json
    from .duality import primal, tgraph_from_dict
    from .graph import build_graph

    data = _read_json(path)
    if data.get("vertices") and "kind" in data["vertices"][0]:
        return primal(build_graph(data), _labels(labels_path))
    try:
        return tgraph_from_dict(data, blue_face)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed tessellation ({exc})") from None


# -- subcommands ---------------------------------------------------------------
# Each returns (report, exit status).

def cmd_validate(a):
    g = _graph(a.graph)
    return {"valid": True, "vertices": g.num_vertices, "edges": g.num_edges,
            "faces": len(g.faces), "ends": len(g.ends), "stubs": len(g.stubs),
            "periodic": g.is_periodic, "euler": g.euler_characteristic(),
            "valences": {str(v): k for v, k in g.valences().items()}}, EXIT_OK


def cmd_bounds(a):
    from .labelling import q_bounds
    b = q_bounds(_graph(a.graph))
    return {**b.as_dict(), "admissible": b.admissible}, EXIT_OK


def cmd_label(a):
    from .labelling import construct_labelling
    g = _graph(a.graph)
    rep = construct_labelling(g, a.q, a.seed)
    out = rep.as_dict()
    if rep.reduced_labelling is not None:
        out["reduced_labelling"] = rep.reduced_labelling.to_dict()
        out["reduced_graph"] = rep.reduced_graph.to_dict()
    consistent_after = rep.ok or (rep.reduced_labelling is not None and rep.verdict.consistent)
    return out, EXIT_OK if consistent_after else EXIT_DOMAIN


def cmd_verify_label(a):
    from .labelling import verify_labelling
    v = verify_labelling(_graph(a.graph), _labels(a.labels))
    return v.as_dict(), EXIT_OK if v.ok else EXIT_DOMAIN


def cmd_extend(a):
    from .extension import apply_extension, solve_extension
    g = _graph(a.graph)
    plan = solve_extension(g, a.q, prefer_minimal=a.prefer_minimal)
    out = plan.as_dict()
    if plan.feasible and a.apply:
        res = apply_extension(g, plan)
        out["graph"] = res.graph.to_dict()
        if res.labelling is not None:
            out["labelling"] = res.labelling.as_dict()
    return out, EXIT_OK if plan.feasible else EXIT_DOMAIN


def cmd_dual(a):
    from .duality import dual
    g, _ = dual(_tgraph(a.tgraph, blue_face=a.blue_face))
    return g.to_dict(), EXIT_OK


def cmd_primal(a):
    from .duality import primal
    return primal(_graph(a.graph), _labels(a.labels)).to_dict(), EXIT_OK


def cmd_subdivide(a):
    from .duality import subdivide_edges
    t = _tgraph(a.tgraph, a.labels)
    return subdivide_edges(t, a.q).to_dict(), EXIT_OK


def cmd_forget2(a):
    from .duality import forget_valence2
    return forget_valence2(_tgraph(a.tgraph, a.labels)).to_dict(), EXIT_OK


def cmd_decompose(a):
    from .decomposition import decompose
    return decompose(_graph(a.graph), _labels(a.labels)).as_dict(), EXIT_OK


def cmd_skeleton(a):
    from .balance import skeleton_of_tgraph, tomasini_skeleton
    t = _tgraph(a.tgraph, a.labels)
    sk = tomasini_skeleton(t) if t.q is not None else skeleton_of_tgraph(t)
    return sk.as_dict(), EXIT_OK


def cmd_balance(a):
    from .balance import (ANCHOR, collapse_digons, hall_check, koch_lei_check, runnable,
                          skeleton_of_tgraph, tomasini_balance)
    from .duality import primal

    g = _graph(a.graph)
    conds = ["hall", "koch-lei", "tomasini"] if a.condition == "all" else [a.condition]
    rows = {}
    t = None
    if set(conds) - {"hall"}:
        reason = runnable(g)
        if reason:
            raise InputError(f"local balance checks need a finite Jordan tessellation: {reason}")
        g = collapse_digons(g)
        t = primal(g)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for c in conds:
            if c == "hall":
                v = hall_check(g)
            elif c == "koch-lei":
                v = koch_lei_check(t, a.max_cycle)
            else:
                v = tomasini_balance(skeleton_of_tgraph(t), a.max_subgraph)
            rows[c] = v.as_dict()
    out = {"verdicts": rows, "anchor": ANCHOR, "warnings": sorted({str(w.message) for w in caught})}
    ok = all(r["result"] == "Balanced" for r in rows.values())
    return out, EXIT_OK if ok else EXIT_DOMAIN


def cmd_corpus_run(a):
    from .corpus import corpus_run
    rep = corpus_run(a.manifest, jobs=a.jobs, only=a.only)
    return rep, EXIT_OK if rep.passed else EXIT_DOMAIN


def cmd_render(a):
    from .render import render
    g = _graph(a.graph)
    return render(g, _labels(a.labels), a.format, motif=not a.full), EXIT_OK


# -- formatting ----------------------------------------------------------------

def _balance_tsv(report: dict) -> str:
    lines = ["condition\tresult\tglobal\tlocal\ttruncated"]
    for c, v in report["verdicts"].items():
        lines.append(f"{c}\t{v['result']}\t{v['global']}\t{v['local']}\t{v.get('truncated', False)}")
    return "\n".join(lines) + "\n"


def _corpus_tsv(rep) -> str:
    lines = ["id\tpassed\tmismatches"]
    for e in rep.entries:
        n = sum(len(c["mismatches"]) for c in e.checks.values()) + (e.error is not None)
        lines.append(f"{e.id}\t{e.passed}\t{n}")
    return "\n".join(lines) + "\n"


def format_output(command: str, report, fmt: str) -> str:
    if isinstance(report, str):
        return report
    if command == "corpus-run":
        return _corpus_tsv(report) if fmt == "tsv" else report.to_json() + "\n"
    if fmt == "tsv" and command == "balance":
        return _balance_tsv(report)
    return dumps(report) + "\n"


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="speiser", description="Speiser graph toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, *args, help=None):
        sp = sub.add_parser(name, help=help)
        for arg in args:
            arg(sp)
        sp.add_argument("--out", type=Path, help="write the report here instead of stdout")
        sp.add_argument("--format", default="json", choices=("json", "tsv", "dot", "svg"))
        sp.set_defaults(func=func)
        return sp

    graph = lambda sp: sp.add_argument("graph", type=Path)
    tgraph = lambda sp: sp.add_argument("tgraph", type=Path)
    labels_opt = lambda sp: sp.add_argument("--labels", type=Path)
    q_req = lambda sp: sp.add_argument("--q", type=int, required=True)

    add("validate", cmd_validate, graph, help="check a graph file")
    add("bounds", cmd_bounds, graph, help="admissible index range")
    add("label", cmd_label, graph, q_req,
        lambda sp: sp.add_argument("--seed", type=int), help="construct a labelling")
    add("verify-label", cmd_verify_label, graph,
        lambda sp: sp.add_argument("labels", type=Path), help="check a labelling")
    add("extend", cmd_extend, graph, q_req,
        lambda sp: sp.add_argument("--apply", action="store_true"),
        lambda sp: sp.add_argument("--prefer-minimal", action="store_true"),
        help="solve the extension problem")
    add("dual", cmd_dual, tgraph, lambda sp: sp.add_argument("--blue-face", type=int),
        help="graph of a tessellation")
    add("primal", cmd_primal, graph, labels_opt, help="tessellation of a graph")
    add("subdivide", cmd_subdivide, tgraph, labels_opt,
        lambda sp: sp.add_argument("--q", type=int), help="t-graph to A-map")
    add("forget2", cmd_forget2, tgraph, labels_opt, help="A-map to t-graph")
    add("decompose", cmd_decompose, graph, labels_opt, help="ends, nucleus, divisor, tags")
    add("skeleton", cmd_skeleton, tgraph, labels_opt, help="black/red skeleton")
    add("balance", cmd_balance, graph,
        lambda sp: sp.add_argument("--condition", default="all",
                                   choices=("hall", "koch-lei", "tomasini", "all")),
        lambda sp: sp.add_argument("--max-cycle", type=int, default=12),
        lambda sp: sp.add_argument("--max-subgraph", type=int, default=8),
        help="local balance conditions")
    add("corpus-run", cmd_corpus_run,
        lambda sp: sp.add_argument("--manifest", type=Path),
        lambda sp: sp.add_argument("--jobs", type=int, default=1),
        lambda sp: sp.add_argument("--only", nargs="*"),
        help="check the corpus against its expectations")
    add("render", cmd_render, graph, labels_opt,
        lambda sp: sp.add_argument("--full", action="store_true",
                                   help="refuse to draw periodic graphs as a single motif"),
        help="DOT or SVG drawing")
    return p


def main(argv: Optional[list] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "render" and args.format not in ("dot", "svg"):
            args.format = "svg"
        report, status = args.func(args)
        text = format_output(args.command, report, args.format)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(dumps({"error": "FileError", "message": str(exc)}))
        return EXIT_FILE
    except SpeiserError as exc:
        print(dumps(exc.as_dict()))
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_INPUT if isinstance(exc, InputError) else EXIT_DOMAIN
    if args.out:
        try:
            args.out.write_text(text)
        except OSError as exc:
            print(dumps({"error": "FileError", "message": str(exc)}))
            return EXIT_FILE
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
