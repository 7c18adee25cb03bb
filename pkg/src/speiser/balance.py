"""Three local-balance tests side by side: Hall inequalities on the pre-Speiser
graph, oriented cycles on the t-graph, and subgraphs of the skeleton."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

from .duality import Color, TGraph, forget_valence2, primal
from .errors import BoundTooSmall, NotHomogeneous
from .extension import check_witness, deficiencies, global_balance, max_flow_plan
from .graph import CombinatorialMap, Kind, RotationGraph, _j
from .labelling import q_bounds

HALL, KOCH_LEI, TOMASINI = "hall", "koch-lei", "tomasini"
ANCHOR = "sphere: left region of the oriented cycle, no face excluded"


@dataclass
class BalanceVerdict:
    condition: str
    balanced: bool
    global_ok: bool
    local_ok: bool
    certificate: Optional[dict] = None
    parameters: dict = field(default_factory=dict)
    truncated: bool = False

    def as_dict(self) -> dict:
        out = {"condition": self.condition,
               "result": "Balanced" if self.balanced else "Violated",
               "global": self.global_ok, "local": self.local_ok,
               "parameters": dict(self.parameters)}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.truncated:
            out["truncated"] = True
        return out


# -- Hall ---------------------------------------------------------------------

def hall_check(g: RotationGraph) -> BalanceVerdict:
    """Feasible for some q between the valence bound and the face bound."""
    qb = q_bounds(g)
    top = max(qb.q_min, int(min(qb.q_max, 10 ** 6)))
    first = None
    for q in range(qb.q_min, top + 1):
        plan = max_flow_plan(g, q)
        if plan.feasible:
            return BalanceVerdict(HALL, True, True, True, parameters={"q": q})
        if first is None:
            first = plan
    sums = first.balance
    cert = {"q": first.q}
    if first.witness is not None:
        cert.update(first.witness.as_dict())
        cert["S"] = [_j(v) for v in first.witness.S]
        cert["N"] = [_j(v) for v in first.witness.neighbourhood]
    return BalanceVerdict(HALL, False, sums.balanced, first.witness is None or not sums.balanced,
                          certificate=cert,
                          parameters={"q_range": [qb.q_min, top]})


def check_hall_certificate(g: RotationGraph, cert: dict) -> bool:
    from .extension import HallWitness

    lookup = {_j(v): v for v in g.vertices}
    S = tuple(lookup[s] for s in cert["S"])
    N = tuple(lookup[s] for s in cert["N"])
    w = HallWitness(g.kind(S[0]), S, N, cert["lhs"], cert["rhs"])
    return check_witness(g, cert["q"], w)


# -- Koch-Lei -----------------------------------------------------------------

def _blue_left_cycles(t: TGraph, max_len: int):
    """Simple directed cycles through darts with a blue tile on their left.

    Yields dart tuples starting at the cycle's smallest vertex (by position),
    in lexicographic order of the dart sequence.  The second value of each
    yielded pair tells whether some path was cut at the bound.
    """
    order = {v: i for i, v in enumerate(t.rotations)}
    out_darts = {v: [d for d in t.rotations[v] if t.color_of_dart(d) is Color.BLUE]
                 for v in t.rotations}
    hit_bound = False
    found = []
    for start in t.rotations:
        s = order[start]
        path, on_path = [], {start}

        def rec(v):
            nonlocal hit_bound
            for d in out_darts[v]:
                w = t.vertex_of(t.twins[d])
                if order[w] < s:
                    continue
                if w == start:
                    found.append(tuple(path + [d]))
                    continue
                if w in on_path:
                    continue
                if len(path) + 1 >= max_len:
                    hit_bound = True
                    continue
                path.append(d)
                on_path.add(w)
                rec(w)
                path.pop()
                on_path.discard(w)

        rec(start)
    return found, hit_bound


def left_region(t: CombinatorialMap, cycle) -> set:
    """Faces on the left of a simple closed dart path."""
    on_cycle = set(cycle) | {t.twins[d] for d in cycle}
    region = {t.face_of[d] for d in cycle}
    todo = list(region)
    walks = {f.index: f.darts for f in t.faces}
    while todo:
        f = todo.pop()
        for d in walks[f]:
            if d in on_cycle:
                continue
            g = t.face_of[t.twins[d]]
            if g not in region:
                region.add(g)
                todo.append(g)
    return region


def cycle_counts(t: TGraph, cycle) -> tuple:
    region = left_region(t, cycle)
    blue = sum(1 for f in region if t.colors[f] is Color.BLUE)
    return blue, len(region) - blue


def koch_lei_check(t: TGraph, max_cycle_len: int = 12) -> BalanceVerdict:
    blue = len(t.tiles(Color.BLUE))
    grey = len(t.tiles(Color.GREY))
    global_ok = blue == grey
    cycles, hit = _blue_left_cycles(t, max_cycle_len)
    cert = None
    for c in cycles:
        b, gr = cycle_counts(t, c)
        if b <= gr:
            cert = {"cycle": list(c), "vertices": [_j(t.vertex_of(d)) for d in c],
                    "blue": b, "grey": gr}
            break
    if hit:
        warnings.warn(BoundTooSmall(f"cycle enumeration stopped at length {max_cycle_len}"))
    if cert is None and not global_ok:
        cert = {"blue_tiles": blue, "grey_tiles": grey}
    return BalanceVerdict(KOCH_LEI, global_ok and cert is None, global_ok,
                          cert is None or "cycle" not in cert, certificate=cert,
                          parameters={"max_cycle_len": max_cycle_len, "anchor": ANCHOR,
                                      "cycles": len(cycles)},
                          truncated=hit)


def check_koch_lei_certificate(t: TGraph, cert: dict) -> bool:
    c = cert["cycle"]
    if any(t.color_of_dart(d) is not Color.BLUE for d in c):
        return False
    for a, b in zip(c, c[1:] + c[:1]):
        if t.vertex_of(t.twins[a]) != t.vertex_of(b):
            return False
    if len({t.vertex_of(d) for d in c}) != len(c):
        return False
    b, g = cycle_counts(t, c)
    return b == cert["blue"] and g == cert["grey"] and b <= g


# -- Tomasini -------------------------------------------------------------------

@dataclass
class Skeleton:
    """Bipartite map: black vertex per blue tile, red vertex per surviving corner vertex."""

    black: list
    red: list
    edges: list            # (black, red) incidences, with multiplicity
    map: Optional[CombinatorialMap]     # None for a lone black vertex

    @property
    def num_faces(self) -> int:
        return len(self.map.faces) if self.map is not None else 1

    def red_neighbours(self, b) -> list:
        return [r for bb, r in self.edges if bb == b]

    def as_dict(self) -> dict:
        return {"black": [_j(b) for b in self.black], "red": [_j(r) for r in self.red],
                "edges": [[_j(b), _j(r)] for b, r in self.edges],
                "faces": self.num_faces}


def _star_skeleton(t: TGraph) -> Skeleton:
    """Each blue tile becomes a black vertex joined to its corners; red
    vertices that end up with a single edge are erased."""
    incid = {v: 0 for v in t.rotations}
    for f in t.tiles(Color.BLUE):
        for d in f.darts:
            incid[t.vertex_of(d)] += 1
    keep = {v for v, k in incid.items() if k >= 2}
    rotations, twins = {}, {}
    dart = 0
    corner_dart = {}
    for f in t.tiles(Color.BLUE):
        b = f"b{f.index}"
        rot = []
        for d in f.darts:
            v = t.vertex_of(d)
            if v not in keep:
                continue
            rot.append(dart)
            corner_dart[d] = dart
            dart += 1
        rotations[b] = rot
    for v in t.rotations:
        if v not in keep:
            continue
        # counterclockwise around v, one spoke per blue corner
        rot = []
        for d in t.rotations[v]:
            if t.color_of_dart(d) is Color.BLUE:
                rot.append(dart)
                twins[dart], twins[corner_dart[d]] = corner_dart[d], dart
                dart += 1
        rotations[f"r{_j(v)}"] = rot
    blacks = [k for k in rotations if k.startswith("b")]
    reds = [k for k in rotations if k.startswith("r")]
    if not twins:
        return Skeleton(blacks, reds, [], None)
    m = CombinatorialMap(rotations, twins)
    edges = []
    for b in blacks:
        for d in rotations[b]:
            edges.append((b, m.vertex_of(twins[d])))
    return Skeleton(blacks, reds, edges, m)


def tomasini_skeleton(a: TGraph) -> Skeleton:
    """Skeleton of a homogeneous labelled A-map."""
    if a.q is None or not a.is_homogeneous(a.q):
        raise NotHomogeneous("skeleton construction needs every tile to be a q-gon")
    return _star_skeleton(a)


def skeleton_of_tgraph(t: TGraph) -> Skeleton:
    """Same construction straight from a t-graph: valence-2 corners never survive."""
    return _star_skeleton(t)


def _connected_black_sets(sk: Skeleton, max_size: int):
    nbr = {b: set() for b in sk.black}
    reds = {}
    for b, r in sk.edges:
        reds.setdefault(r, set()).add(b)
    for r, bs in reds.items():
        for b in bs:
            nbr[b] |= bs - {b}
    order = {b: i for i, b in enumerate(sk.black)}
    seen = set()
    hit = False
    frontier = [frozenset([b]) for b in sk.black]
    for size in range(2, max_size + 1):
        nxt = []
        for S in frontier:
            for b in sorted(set().union(*(nbr[x] for x in S)) - S, key=order.get):
                T = S | {b}
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        nxt.sort(key=lambda T: sorted(order[x] for x in T))
        yield from nxt
        frontier = nxt
    if len(sk.black) > max_size and frontier:
        hit = True
    if hit:
        warnings.warn(BoundTooSmall(f"subgraph enumeration stopped at {max_size} black vertices"))


def subgraph_counts(sk: Skeleton, blacks) -> tuple:
    """(#black, #faces) of the largest subgraph on these black vertices."""
    blacks = set(blacks)
    edges = [(b, r) for b, r in sk.edges if b in blacks]
    reds = {r for _, r in edges}
    v = len(blacks) + len(reds)
    return len(blacks), len(edges) - v + 2


def tomasini_balance(sk: Skeleton, max_subgraph_size: int = 8) -> BalanceVerdict:
    global_ok = len(sk.black) == sk.num_faces
    cert = None
    for S in _connected_black_sets(sk, max_subgraph_size):
        nb, nf = subgraph_counts(sk, S)
        if nb < nf:
            ordered = [b for b in sk.black if b in S]
            cert = {"black": [_j(b) for b in ordered], "black_count": nb, "faces": nf}
            break
    if cert is None and not global_ok:
        cert = {"black_vertices": len(sk.black), "faces": sk.num_faces}
    truncated = len(sk.black) > max_subgraph_size
    return BalanceVerdict(TOMASINI, global_ok and cert is None, global_ok,
                          cert is None or "black" not in cert, certificate=cert,
                          parameters={"max_subgraph_size": max_subgraph_size},
                          truncated=truncated)


def check_tomasini_certificate(sk: Skeleton, cert: dict) -> bool:
    lookup = {_j(b): b for b in sk.black}
    S = [lookup[b] for b in cert["black"]]
    nb, nf = subgraph_counts(sk, S)
    return nb == cert["black_count"] and nf == cert["faces"] and nb < nf and nb > 1


# -- harness ------------------------------------------------------------------

def collapse_digons(g: RotationGraph) -> RotationGraph:
    """Drop one edge of every digon face until none is left; bundles become single edges."""
    while g.is_finite:
        f = next((f for f in g.faces
                  if f.is_digon and g.twins.get(f.darts[0]) != f.darts[1]), None)
        if f is None:
            break
        d = f.darts[1]
        gone = {d, g.twins[d]}
        rotations = {v: [x for x in r if x not in gone] for v, r in g.rotations.items()}
        twins = {x: y for x, y in g.twins.items() if x not in gone}
        g = RotationGraph(g.kinds, rotations, twins, meta=g.meta)
    return g


def runnable(g: RotationGraph) -> Optional[str]:
    """Why the three checks cannot all run on ``g`` (``None`` when they can).
    Digons are collapsed first."""
    if not g.is_finite:
        return "not finite"
    g = collapse_digons(g)
    if min(g.valences().values()) < 2:
        return "valence below 2"
    if any(len(f.darts) < 4 for f in g.faces):
        return "face with fewer than 4 sides"
    for v, rot in g.rotations.items():
        fs = [g.face_of[d] for d in rot]
        if len(set(fs)) != len(fs):
            return "tile is not a Jordan region"
    return None


@dataclass
class HarnessRow:
    name: str
    hall: BalanceVerdict
    koch_lei: BalanceVerdict
    tomasini: BalanceVerdict

    @property
    def agree(self) -> bool:
        return self.hall.balanced == self.koch_lei.balanced == self.tomasini.balanced

    def as_dict(self) -> dict:
        return {"name": self.name, "agree": self.agree,
                "hall": self.hall.as_dict(), "koch_lei": self.koch_lei.as_dict(),
                "tomasini": self.tomasini.as_dict()}


def tri_verdict(g: RotationGraph, name: str = "", max_cycle_len: int = 12,
                max_subgraph_size: int = 8) -> HarnessRow:
    g = collapse_digons(g)
    t = primal(g)
    return HarnessRow(name, hall_check(g), koch_lei_check(t, max_cycle_len),
                      tomasini_balance(skeleton_of_tgraph(t), max_subgraph_size))


def conjecture_harness(instances, max_cycle_len: int = 12, max_subgraph_size: int = 8) -> dict:
    rows, skipped = [], []
    for name, g in instances:
        why = runnable(g)
        if why is not None:
            skipped.append({"name": name, "reason": why})
            continue
        rows.append(tri_verdict(g, name, max_cycle_len, max_subgraph_size))
    return {"rows": rows, "skipped": skipped,
            "disagreements": [r for r in rows if not r.agree]}
