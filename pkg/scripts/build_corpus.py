"""Regenerate the bundled corpus (graphs, labellings, manifest) from the fixtures.

Expected summaries below are written by hand from the source figures and
examples; only the graph and labelling files are generated.

    python3 scripts/build_corpus.py [--out DIR]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from speiser import fixtures
from speiser.extension import ExtensionPlan, apply_extension, enumerate_plans, max_flow_plan, solve_extension
from speiser.labelling import construct_labelling, insert_digon_label

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "speiser" / "corpus"

NUCLEUS_FIGURE = "Fig. fig-4-Speiser"

# id -> (figure, expected); every number here is read off the figure
EXPECTED = {
    "exp-ladder": ("Fig. Tessellation-Exp.c", {
        "decompose": {"ends": 2, "nucleus_vertices": 0, "p": 2, "r": 0,
                      "tags": ["FiniteSpeiser", "N-function", "Parabolic"]},
        "labelling": {"ok": True},
    }),
    "airy": ("Fig. Tessellation-AiBi.c", {
        "decompose": {"ends": 3, "nucleus_vertices": 1, "p": 3, "r": 0},
        "labelling": {"ok": True},
    }),
    "w4": ("Fig. Tessellation-p=4.c", {
        "decompose": {"ends": 4, "nucleus_vertices": 10, "loose_darts": 4, "p": 4},
        "labelling": {"ok": True},
    }),
    "fig-4-a": (NUCLEUS_FIGURE + ".a", {"decompose": {"nucleus_vertices": 1, "ends": 4}}),
    "fig-4-b": (NUCLEUS_FIGURE + ".b", {"decompose": {"nucleus_vertices": 2, "ends": 4}}),
    "fig-4-c": (NUCLEUS_FIGURE + ".c", {"decompose": {"nucleus_vertices": 3, "ends": 4}}),
    "fig-4-d": (NUCLEUS_FIGURE + ".d", {
        "decompose": {"ends": 4},
        "labelling": {"ok": True, "q": 3},
    }),
    "fig-4-e": (NUCLEUS_FIGURE + ".e", {
        "labelling": {"ok": False, "consistent": True, "q": 4, "failing_labels": [3],
                      "reduced_q": 3},
    }),
    "fig-4-f": (NUCLEUS_FIGURE + ".f (stored as the graph of .e)", {
        "labelling": {"ok": False, "failing_labels": [3], "reduced_q": 3},
    }),
    "thurston-fig10": ("Fig. Thurston-Koch-TanLei.b", {
        "bounds": {"q_min": 5, "q_max": 6},
        "extend": {"5": {"feasible": True}, "6": {"feasible": True}},
        "balance": {"hall": "Balanced", "koch_lei": "Balanced", "tomasini": "Balanced"},
        "duality": {"dual_dual": True, "extension_q": 5, "core_is_tessellation": True,
                    "subdivide_forget": True, "commuting_square": True},
    }),
    "thurston-fig10-q5": ("Fig. MosaicoSpeiser-q5", {
        "balance": {"hall": "Balanced", "koch_lei": "Balanced", "tomasini": "Balanced"},
        "labelling": {"ok": True, "q": 5},
        "decompose": {"tags": ["Elliptic", "Rational"]},
        "duality": {"dual_dual": True, "subdivide_forget": True, "subdivide_is_primal": True,
                    "commuting_square": True},
    }),
    "thurston-fig10-q6": ("Fig. MosaicoSpeiser-q6", {
        "balance": {"hall": "Balanced", "koch_lei": "Balanced", "tomasini": "Balanced"},
        "labelling": {"ok": True, "q": 6},
        "decompose": {"tags": ["Elliptic", "Rational"]},
        "duality": {"dual_dual": True, "subdivide_forget": True, "subdivide_is_primal": True,
                    "commuting_square": True},
    }),
    "thurston-fig10-amap": ("Fig. Non-consistent-6-labbeled", {
        "balance": {"hall": "Balanced", "koch_lei": "Balanced", "tomasini": "Balanced"},
        "labelling": {"ok": False, "consistent": True, "q": 6, "failing_labels": [4],
                      "reduced_q": 5},
        "duality": {"dual_dual": True, "subdivide_forget": True, "subdivide_is_primal": True,
                    "commuting_square": True},
    }),
    "no-local-balance": ("Fig. mosaico-speiser-graph-No-localbalance.e-f", {
        "bounds": {"q_min": 5, "q_max": 8},
        "extend": {str(q): {"feasible": False, "globally_balanced": True, "side": "cross",
                            "S": ["x2", "x3"], "N": ["o4", "o5"]} for q in range(5, 9)},
        "balance": {"hall": "Violated", "koch_lei": "Violated", "tomasini": "Violated",
                    "tomasini_global": "Balanced"},
        "duality": {"dual_dual": True, "subdivide_forget": "no labelling exists"},
    }),
    "exp-exp": ("Fig. mosaico-exp-exp.b", {
        "decompose": {"periodic": True, "finite_speiser": False},
    }),
    "exp-sin": ("Fig. figExpSin.b", {
        "decompose": {"periodic": True, "finite_speiser": False},
        "labelling": {"ok": True, "q": 4},
    }),
    "sin-exp-sin": ("Fig. SinExpSin.b", {
        "decompose": {"periodic": True, "finite_speiser": False},
        "labelling": {"ok": True, "q": 4},
    }),
    "eph": ("Fig. Speiser3-types", {
        "decompose": {"ends": 1, "truncated": True, "tags": ["Unknown"]},
    }),
    "nevanlinna-p2": ("Fig. Tessellation-Exp.c, two rungs drawn explicitly", {
        "decompose": {"ends": 2, "nucleus_vertices": 0, "p": 2},
        "same_as": {"isomorphic_to": "exp-ladder"},
    }),
    "nevanlinna-p3": ("Fig. Tessellation-AiBi.c, one rung drawn explicitly", {
        "decompose": {"ends": 3, "nucleus_vertices": 1, "p": 3},
        "same_as": {"isomorphic_to": "airy"},
    }),
}


def _amap_plan(g):
    """The q=6 resolution of the figure-10 graph whose labelling fails only at label 4."""
    base = max_flow_plan(g, 6)
    for x in enumerate_plans(g, 6):
        plan = ExtensionPlan(6, x=x, balance=base.balance, edges=base.edges)
        res = apply_extension(g, plan)
        if res.labelling.verdict.consistent and res.labelling.verdict.failing_labels == [4]:
            return res
    raise SystemExit("no q=6 plan fails exactly at label 4")


def build_entries() -> dict:
    """id -> (graph, labelling or None)."""
    out = {}
    for name, make in fixtures.all_fixtures().items():
        out[name] = (make(), None)
    for name, q in (("exp-ladder", 2), ("airy", 3), ("w4", 3), ("fig-4-d", 3),
                    ("exp-sin", 4), ("sin-exp-sin", 4)):
        g = out[name][0]
        L = construct_labelling(g, q).labelling
        out[name] = (g, L)
    g, L = out["w4"]
    out["w4"] = (g, L.shifted(1))
    g, L = out["fig-4-d"]
    e, Le = insert_digon_label(g, L, 3)
    out["fig-4-e"] = (e.replace(meta={"name": "fig-4-e"}), Le)
    out["fig-4-f"] = (e.replace(meta={"name": "fig-4-f"}), Le)
    fig10 = out["thurston-fig10"][0]
    for q in (5, 6):
        res = apply_extension(fig10, solve_extension(fig10, q, prefer_minimal=True))
        out[f"thurston-fig10-q{q}"] = (res.graph.replace(meta={"name": f"thurston-fig10-q{q}"}),
                                       res.labelling.labelling)
    res = _amap_plan(fig10)
    out["thurston-fig10-amap"] = (res.graph.replace(meta={"name": "thurston-fig10-amap"}),
                                  res.labelling.labelling)
    return out


def write_corpus(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = build_entries()
    manifest = []
    for eid in sorted(entries):
        g, L = entries[eid]
        provenance, expected = EXPECTED[eid]
        (out_dir / f"{eid}.json").write_text(json.dumps(g.to_dict(), indent=1) + "\n")
        item = {"id": eid, "file": f"{eid}.json", "provenance": provenance,
                "expected": expected}
        if L is not None:
            (out_dir / f"{eid}.labels.json").write_text(json.dumps(L.to_dict()) + "\n")
            item["labelling"] = f"{eid}.labels.json"
        manifest.append(item)
    (out_dir / "manifest.json").write_text(json.dumps({"entries": manifest}, indent=1) + "\n")
    print(f"wrote {len(manifest)} entries to {out_dir}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    write_corpus(ap.parse_args().out)


if __name__ == "__main__":
    main()
