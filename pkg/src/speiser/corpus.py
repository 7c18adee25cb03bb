"""Bundled corpus: manifest loading, per-entry analyses and the regression run."""

from __future__ import annotations

import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .errors import ManifestMalformed, SpeiserError
from .graph import RotationGraph, build_graph, is_isomorphic
from .labelling import Labelling

PACKAGE_CORPUS = Path(__file__).with_name("corpus")
ANALYSES = ("structure", "bounds", "extend", "labelling", "decompose", "balance",
            "duality", "same_as")


def corpus_dir() -> Path:
    env = os.environ.get("SPEISER_CORPUS_DIR")
    return Path(env) if env else PACKAGE_CORPUS


@dataclass
class CorpusEntry:
    id: str
    file: Path
    provenance: str
    expected: dict
    labelling: Optional[Path] = None

    def graph(self) -> RotationGraph:
        return load_graph(self.file)

    def labels(self) -> Optional[Labelling]:
        return load_labelling(self.labelling) if self.labelling else None


def _read_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        from .errors import InputError
        raise InputError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None


def load_graph(path) -> RotationGraph:
    return build_graph(_read_json(path))


def load_labelling(path) -> Labelling:
    return Labelling.from_dict(_read_json(path))


def load_manifest(path=None) -> list:
    path = Path(path) if path else corpus_dir() / "manifest.json"
    data = _read_json(path)
    if not isinstance(data, Mapping) or not isinstance(data.get("entries"), list):
        raise ManifestMalformed(f"{path}: expected an object with an 'entries' list")
    entries, seen = [], set()
    for raw in data["entries"]:
        try:
            eid, file, expected = raw["id"], raw["file"], raw.get("expected", {})
        except (KeyError, TypeError):
            raise ManifestMalformed(f"{path}: entry {raw!r} needs 'id' and 'file'") from None
        if eid in seen:
            raise ManifestMalformed(f"{path}: duplicate entry id {eid!r}")
        seen.add(eid)
        unknown = set(expected) - set(ANALYSES)
        if unknown:
            raise ManifestMalformed(f"{path}: entry {eid!r} has unknown analyses {sorted(unknown)}")
        if expected and not raw.get("provenance"):
            raise ManifestMalformed(f"{path}: entry {eid!r} has expectations without provenance")
        lab = raw.get("labelling")
        entries.append(CorpusEntry(eid, path.parent / file, raw.get("provenance", ""),
                                   expected, path.parent / lab if lab else None))
    return entries


# -- analyses ------------------------------------------------------------------
# Each returns a JSON-ready summary; the manifest lists a subset of its keys.

def summarize_structure(g: RotationGraph, **_) -> dict:
    return {"vertices": g.num_vertices, "edges": g.num_edges, "loose_darts": len(g.loose_darts),
            "faces": len(g.faces), "euler": g.euler_characteristic(),
            "finite": g.is_finite, "periodic": g.is_periodic}


def summarize_bounds(g: RotationGraph, **_) -> dict:
    from .labelling import q_bounds
    return q_bounds(g).as_dict()


def summarize_extend(g: RotationGraph, qs=(), **_) -> dict:
    from .extension import solve_extension
    from .graph import _j

    out = {}
    for q in qs:
        plan = solve_extension(g, int(q))
        row = {"feasible": plan.feasible, "globally_balanced": plan.balance.balanced}
        if plan.witness is not None:
            row.update(side=plan.witness.side.value,
                       S=[_j(v) for v in plan.witness.S],
                       N=[_j(v) for v in plan.witness.neighbourhood])
        out[str(q)] = row
    return out


def summarize_labelling(g: RotationGraph, L: Optional[Labelling] = None, **_) -> dict:
    from .labelling import minimality_descent, verify_labelling

    if L is None:
        return {"error": "entry has no labelling"}
    v = verify_labelling(g, L)
    out = {"q": L.q, "ok": v.ok, "consistent": v.consistent, "failing_labels": v.failing_labels}
    if v.consistent and v.failing_labels:
        _, L0, _ = minimality_descent(g, L)
        out["reduced_q"] = L0.q
    return out


def summarize_decompose(g: RotationGraph, L: Optional[Labelling] = None, **_) -> dict:
    from .decomposition import decompose

    rep = decompose(g, L)
    c = rep.counts
    return {"ends": c["ends"], "nucleus_vertices": c["nucleus_vertices"],
            "loose_darts": c["loose_darts"], "p": c["p"], "r": c["r"],
            "tags": sorted(rep.tags), "periodic": g.is_periodic, "truncated": g.is_truncated,
            "finite_speiser": "FiniteSpeiser" in rep.tags}


def _word(ok: bool) -> str:
    return "Balanced" if ok else "Violated"


def summarize_balance(g: RotationGraph, **_) -> dict:
    from .balance import runnable, tri_verdict

    reason = runnable(g)
    if reason:
        return {"skipped": reason}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        row = tri_verdict(g)
    return {"hall": _word(row.hall.balanced), "koch_lei": _word(row.koch_lei.balanced),
            "tomasini": _word(row.tomasini.balanced),
            "koch_lei_global": _word(row.koch_lei.global_ok),
            "tomasini_global": _word(row.tomasini.global_ok)}


def summarize_duality(g: RotationGraph, L: Optional[Labelling] = None, **_) -> dict:
    from .duality import commuting_square, dual, forget_valence2, primal, subdivide_edges

    if not g.is_finite:
        return {"skipped": "duality is implemented for finite graphs only"}
    t = primal(g, L)
    back, _ = dual(t)
    out = {"dual_dual": is_isomorphic(g, back)}
    if L is None:
        # an unlabelled tessellation takes its labels from the first extension found
        ext = _first_extension(g)
        if ext is None:
            out["subdivide_forget"] = "no labelling exists"
            return out
        t = primal(*ext)
        out["extension_q"] = ext[1].q
    # digons of g are the valence-2 corners of t; the round trip lives on the t-graph
    core = forget_valence2(t)
    if L is None:
        out["core_is_tessellation"] = is_isomorphic(core, primal(g))
    sub = subdivide_edges(core)
    back = forget_valence2(sub)
    out["subdivide_forget"] = is_isomorphic(core, back, core.label_data(), back.label_data())
    out["commuting_square"] = commuting_square(core)
    if L is not None:
        out["subdivide_is_primal"] = is_isomorphic(t, sub, t.label_data(), sub.label_data())
    return out


def _first_extension(g: RotationGraph):
    """(regular graph, labelling) for the smallest q whose extension is feasible
    and consistently labelled, or None."""
    from .extension import apply_extension, solve_extension
    from .labelling import q_bounds

    qb = q_bounds(g)
    for q in range(qb.q_min, int(min(qb.q_max, qb.q_min + 16)) + 1):
        plan = solve_extension(g, q, prefer_minimal=True)
        if plan.feasible:
            res = apply_extension(g, plan)
            if res.labelling is not None and res.labelling.ok:
                return res.graph, res.labelling.labelling
    return None


def summarize_same_as(g: RotationGraph, other: Optional[RotationGraph] = None,
                      other_id: Optional[str] = None, **_) -> dict:
    from .decomposition import maximize_ends

    if other is None:
        return {"isomorphic_to": None}
    same = is_isomorphic(maximize_ends(g), maximize_ends(other))
    return {"isomorphic_to": other_id if same else None}


SUMMARIZERS = {
    "structure": summarize_structure, "bounds": summarize_bounds, "extend": summarize_extend,
    "labelling": summarize_labelling, "decompose": summarize_decompose,
    "balance": summarize_balance, "duality": summarize_duality, "same_as": summarize_same_as,
}


# -- running -------------------------------------------------------------------

def diff(expected, actual, path: str = "") -> list:
    """Mismatches of ``expected`` against ``actual``; extra actual keys are ignored."""
    if isinstance(expected, Mapping):
        if not isinstance(actual, Mapping):
            return [{"path": path or "/", "expected": expected, "actual": actual}]
        out = []
        for k in expected:
            out += diff(expected[k], actual.get(k, "<missing>"), f"{path}/{k}")
        return out
    return [] if expected == actual else [{"path": path, "expected": expected, "actual": actual}]


@dataclass
class EntryResult:
    id: str
    provenance: str
    checks: dict = field(default_factory=dict)    # analysis -> {"actual", "mismatches"}
    error: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.error is None and not any(c["mismatches"] for c in self.checks.values())

    def as_dict(self) -> dict:
        out = {"id": self.id, "passed": self.passed, "provenance": self.provenance,
               "checks": {k: self.checks[k] for k in sorted(self.checks)}}
        if self.error is not None:
            out["error"] = self.error
        return out


def run_entry(entry: CorpusEntry, lookup: Optional[Mapping] = None) -> EntryResult:
    res = EntryResult(entry.id, entry.provenance)
    try:
        g, L = entry.graph(), entry.labels()
        for name in sorted(entry.expected):
            want = entry.expected[name]
            kw = {"L": L}
            if name == "extend":
                kw["qs"] = sorted(want, key=int)
            if name == "same_as":
                oid = want.get("isomorphic_to")
                other = lookup.get(oid) if lookup and oid else None
                kw.update(other=other.graph() if other else None, other_id=oid)
            actual = SUMMARIZERS[name](g, **kw)
            res.checks[name] = {"actual": actual, "mismatches": diff(want, actual)}
    except SpeiserError as exc:
        res.error = exc.as_dict()
    return res


@dataclass
class CorpusReport:
    entries: list
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "total": len(self.entries),
                "failed": [e.id for e in self.entries if not e.passed],
                "entries": [e.as_dict() for e in self.entries],
                "warnings": self.warnings}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=1, sort_keys=True)


def corpus_run(manifest=None, jobs: int = 1, only: Optional[list] = None) -> CorpusReport:
    """Run every expected analysis of every manifest entry and diff the summaries."""
    entries = load_manifest(manifest)
    lookup = {e.id: e for e in entries}
    if only:
        entries = [e for e in entries if e.id in set(only)]
    report = CorpusReport([])
    if not entries:
        report.warnings.append("manifest has no entries; nothing to check")
        return report
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(lambda e: run_entry(e, lookup), entries))
    else:
        results = [run_entry(e, lookup) for e in entries]
    report.entries = sorted(results, key=lambda r: r.id)
    return report
