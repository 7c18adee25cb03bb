"""Extending a pre-Speiser graph to a q-regular one by adding parallel copies.

The number of copies x(e) is an integral transportation problem: every
circle vertex must ship its deficiency ``q - valence`` to cross vertices along
existing edges, and every cross vertex must absorb exactly its own
deficiency.  We solve it as a max-flow; a short cut certifies infeasibility
through a violated neighbourhood inequality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from .errors import (
    GloballyUnbalanced,
    Infeasible,
    PlanMismatch,
    QBelowMinValence,
    TooLarge,
)
from .graph import Kind, RotationGraph
from .labelling import LabellingReport, construct_labelling


@dataclass(frozen=True)
class DeficiencyProfile:
    q: int
    d: Mapping

    def total(self, g: RotationGraph, kind: Kind) -> int:
        return sum(self.d[v] for v in g.vertices_of_kind(kind))


@dataclass(frozen=True)
class BalanceSums:
    circle: int
    cross: int

    @property
    def balanced(self) -> bool:
        return self.circle == self.cross

    def as_dict(self) -> dict:
        return {"circle": self.circle, "cross": self.cross, "balanced": self.balanced}


@dataclass(frozen=True)
class HallWitness:
    side: Kind
    S: tuple
    neighbourhood: tuple
    lhs: int
    rhs: int

    def as_dict(self) -> dict:
        return {"side": self.side.value, "S": [str(v) for v in self.S],
                "N": [str(v) for v in self.neighbourhood], "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class ExtensionPlan:
    """Edge multiplicities keyed by the circle-side dart of each edge."""

    q: int
    x: Optional[dict] = None
    witness: Optional[HallWitness] = None
    balance: Optional[BalanceSums] = None
    edges: tuple = ()
    note: str = ""

    @property
    def feasible(self) -> bool:
        return self.x is not None

    def as_dict(self) -> dict:
        out = {"q": self.q, "feasible": self.feasible}
        if self.x is not None:
            out["x"] = [[d, self.x[d]] for d in sorted(self.x)]
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        if self.balance is not None:
            out["balance"] = self.balance.as_dict()
        if self.note:
            out["note"] = self.note
        return out

    def require_feasible(self) -> "ExtensionPlan":
        if self.feasible:
            return self
        if self.balance is not None and not self.balance.balanced:
            raise GloballyUnbalanced(
                f"deficiency sums differ: circle {self.balance.circle}, cross {self.balance.cross}",
                **self.balance.as_dict())
        raise Infeasible("a neighbourhood inequality fails", self.witness)


@dataclass
class ExtensionResult:
    graph: RotationGraph
    labelling: Optional[LabellingReport]


def deficiencies(g: RotationGraph, q: int) -> DeficiencyProfile:
    vals = g.valences()
    top = max(vals.values())
    if q < top:
        raise QBelowMinValence(f"q={q} is below the largest valence {top}", q=q, q_min=top)
    return DeficiencyProfile(q, {v: q - r for v, r in vals.items()})


def global_balance(g: RotationGraph, profile: DeficiencyProfile) -> BalanceSums:
    return BalanceSums(profile.total(g, Kind.CIRCLE), profile.total(g, Kind.CROSS))


def extension_edges(g: RotationGraph) -> list:
    """Edges eligible for copies, as (circle dart, cross dart), links included."""
    out = []
    for a, b in g.all_edges():
        out.append((a, b) if g.kind_of_dart(a) is Kind.CIRCLE else (b, a))
    return sorted(out)


def neighbourhood(g: RotationGraph, S) -> tuple:
    seen = set()
    for v in S:
        seen.update(g.neighbours(v))
    return tuple(w for w in g.vertices if w in seen)


def hall_values(g: RotationGraph, profile: DeficiencyProfile, S) -> tuple:
    N = neighbourhood(g, S)
    return sum(profile.d[v] for v in S), sum(profile.d[w] for w in N), N


def make_witness(g: RotationGraph, profile: DeficiencyProfile, S) -> Optional[HallWitness]:
    S = tuple(v for v in g.vertices if v in set(S))
    if not S:
        return None
    lhs, rhs, N = hall_values(g, profile, S)
    if lhs <= rhs:
        return None
    return HallWitness(g.kinds[S[0]], S, N, lhs, rhs)


def check_witness(g: RotationGraph, q: int, w: HallWitness) -> bool:
    """Recompute a witness from scratch."""
    prof = deficiencies(g, q)
    if any(g.kinds[v] is not w.side for v in w.S):
        return False
    lhs, rhs, _ = hall_values(g, prof, w.S)
    return lhs == w.lhs and rhs == w.rhs and lhs > rhs


def _shrink(g: RotationGraph, profile: DeficiencyProfile, S: list) -> list:
    """Drop vertices greedily while the inequality stays violated."""
    S = list(S)
    for v in list(S):
        trial = [u for u in S if u != v]
        if trial and make_witness(g, profile, trial) is not None:
            S = trial
    return S


def _network(g: RotationGraph, profile: DeficiencyProfile):
    big = sum(profile.d.values()) + 1
    net = nx.DiGraph()
    net.add_node("source")
    for v in g.vertices:
        net.add_node(("v", v))
    net.add_node("sink")
    for v in g.vertices_of_kind(Kind.CIRCLE):
        net.add_edge("source", ("v", v), capacity=profile.d[v])
    pairs = {}
    for a, b in extension_edges(g):
        key = (g.vertex_of(a), g.vertex_of(b))
        pairs.setdefault(key, []).append(a)
    for (u, w) in pairs:
        net.add_edge(("v", u), ("v", w), capacity=big)
    for w in g.vertices_of_kind(Kind.CROSS):
        net.add_edge(("v", w), "sink", capacity=profile.d[w])
    return net, pairs


def _reach(residual, start, forward: bool) -> set:
    seen, todo = {start}, [start]
    while todo:
        u = todo.pop()
        nbrs = residual.successors(u) if forward else residual.predecessors(u)
        for v in nbrs:
            a, b = (u, v) if forward else (v, u)
            attr = residual[a][b]
            if attr["capacity"] - attr["flow"] > 0 and v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def max_flow_plan(g: RotationGraph, q: int) -> ExtensionPlan:
    profile = deficiencies(g, q)
    sums = global_balance(g, profile)
    edges = tuple(extension_edges(g))
    net, pairs = _network(g, profile)
    residual = edmonds_karp(net, "source", "sink")
    value = residual.graph["flow_value"]
    if sums.balanced and value == sums.circle:
        x = {a: 0 for a, _ in edges}
        for (u, w), reps in pairs.items():
            x[reps[0]] = residual[("v", u)][("v", w)]["flow"]
        return ExtensionPlan(q, x=x, balance=sums, edges=edges)

    src_side = _reach(residual, "source", True)
    S = [v for v in g.vertices_of_kind(Kind.CIRCLE) if ("v", v) in src_side]
    snk_side = _reach(residual, "sink", False)
    T = [w for w in g.vertices_of_kind(Kind.CROSS) if ("v", w) in snk_side]
    candidates = []
    for side in (S, T):
        if side and make_witness(g, profile, side) is not None:
            candidates.append(make_witness(g, profile, _shrink(g, profile, side)))
    if not candidates:  # imbalance with an otherwise saturating flow
        for kind in (Kind.CIRCLE, Kind.CROSS):
            w = make_witness(g, profile, g.vertices_of_kind(kind))
            if w is not None:
                candidates.append(make_witness(g, profile, _shrink(g, profile, list(w.S))))
    witness = min(candidates, key=lambda w: (len(w.S), w.side is Kind.CROSS))
    return ExtensionPlan(q, witness=witness, balance=sums, edges=edges)


def solve_extension(g: RotationGraph, q: int, prefer_minimal: bool = False,
                    search_limit: int = 20000) -> ExtensionPlan:
    """Max-flow extension plan, or a plan carrying a violated inequality.

    With ``prefer_minimal`` and a feasible problem, the max-flow plan is kept
    when its bundle placement admits a minimal labelling; otherwise feasible
    plans are enumerated (bounded by ``search_limit``) and the first one whose
    extension passes the minimality check is returned.
    """
    plan = max_flow_plan(g, q)
    if not plan.feasible or not prefer_minimal:
        return plan
    if _labels_ok(g, plan):
        return plan
    for n, x in enumerate(enumerate_plans(g, q)):
        if n >= search_limit:
            break
        alt = ExtensionPlan(q, x=x, balance=plan.balance, edges=plan.edges)
        if _labels_ok(g, alt):
            alt.note = f"alternative plan #{n}: max-flow plan fails minimality"
            return alt
    plan.note = "no plan within the search limit admits a minimal labelling"
    return plan


def _labels_ok(g: RotationGraph, plan: ExtensionPlan) -> bool:
    res = apply_extension(g, plan)
    return res.labelling is not None and res.labelling.ok


def enumerate_plans(g: RotationGraph, q: int):
    """All feasible x in lexicographic order of the edge list (depth-first)."""
    profile = deficiencies(g, q)
    edges = extension_edges(g)
    need = dict(profile.d)
    inc = {v: 0 for v in g.vertices}
    for a, b in edges:
        inc[g.vertex_of(a)] += 1
        inc[g.vertex_of(b)] += 1
    x = {}

    def rec(i):
        if i == len(edges):
            if all(r == 0 for r in need.values()):
                yield dict(x)
            return
        a, b = edges[i]
        u, w = g.vertex_of(a), g.vertex_of(b)
        inc[u] -= 1
        inc[w] -= 1
        top = min(need[u], need[w])
        for k in range(top + 1):
            need[u] -= k
            need[w] -= k
            if (inc[u] > 0 or need[u] == 0) and (inc[w] > 0 or need[w] == 0):
                x[a] = k
                yield from rec(i + 1)
            need[u] += k
            need[w] += k
        inc[u] += 1
        inc[w] += 1

    yield from rec(0)


def apply_extension(g: RotationGraph, plan: ExtensionPlan, label: bool = True) -> ExtensionResult:
    if not plan.feasible:
        raise PlanMismatch("cannot apply a plan without multiplicities")
    edges = extension_edges(g)
    if set(plan.x) != {a for a, _ in edges}:
        raise PlanMismatch("plan edges do not match the graph's edges")
    deficit = {v: plan.q - r for v, r in g.valences().items()}
    for a, b in edges:
        k = plan.x[a]
        if k < 0:
            raise PlanMismatch(f"negative multiplicity on edge {a}")
        deficit[g.vertex_of(a)] -= k
        deficit[g.vertex_of(b)] -= k
    if any(deficit.values()):
        raise PlanMismatch("plan does not close every deficiency for this graph")

    rotations = {v: list(r) for v, r in g.rotations.items()}
    twins = dict(g.twins)
    links = list(g.links)
    link_dir = {a: True for a, _ in g.links}
    fresh = g.next_dart_id()
    for a, b in edges:
        k = plan.x[a]
        if not k:
            continue
        ra = rotations[g.vertex_of(a)]
        rb = rotations[g.vertex_of(b)]
        new_a = list(range(fresh, fresh + k))
        new_b = list(range(fresh + k, fresh + 2 * k))
        fresh += 2 * k
        i = ra.index(a)
        ra[i + 1:i + 1] = new_a
        j = rb.index(b)
        rb[j:j] = new_b[::-1]
        for da, db in zip(new_a, new_b):
            if a in g.twins:
                twins[da], twins[db] = db, da
            elif link_dir.get(a):
                links.append((da, db))
            else:
                links.append((db, da))
    h = RotationGraph(g.kinds, rotations, twins, g.ends, g.stubs, links, g.meta)
    report = construct_labelling(h, plan.q) if label else None
    return ExtensionResult(h, report)


@dataclass
class BruteVerdict:
    feasible: bool
    x: Optional[dict] = None
    explored: int = 0


def brute_force_feasibility(g: RotationGraph, q: int, max_edges: int = 12) -> BruteVerdict:
    """Exhaustive oracle over x: E -> {0, ..., q-1}; independent of the flow code."""
    if not g.is_finite:
        raise TooLarge("the exhaustive oracle only handles finite graphs")
    edges = extension_edges(g)
    if len(edges) > max_edges:
        raise TooLarge(f"{len(edges)} edges exceed the oracle bound {max_edges}",
                       edges=len(edges))
    vals = g.valences()
    if max(vals.values()) > q:
        raise QBelowMinValence(f"q={q} is below the largest valence", q=q)
    ends = [(g.vertex_of(a), g.vertex_of(b)) for a, b in edges]
    deg = dict(vals)
    combo = []
    explored = 0

    # plain depth-first product over edge multiplicities; the only pruning is
    # that no vertex may exceed valence q
    def rec(i):
        nonlocal explored
        if i == len(ends):
            explored += 1
            return all(r == q for r in deg.values())
        u, w = ends[i]
        for k in range(q):
            if deg[u] + k > q or deg[w] + k > q:
                break
            deg[u] += k
            deg[w] += k
            combo.append(k)
            if rec(i + 1):
                return True
            combo.pop()
            deg[u] -= k
            deg[w] -= k
        return False

    if rec(0):
        return BruteVerdict(True, {a: k for (a, _), k in zip(edges, combo)}, explored)
    return BruteVerdict(False, None, explored)


def hall_witness_search(g: RotationGraph, q: int, max_subset_size: int = 4) -> Optional[HallWitness]:
    """First violated inequality by subset size, circle side before cross side."""
    profile = deficiencies(g, q)
    for size in range(1, max_subset_size + 1):
        for kind in (Kind.CIRCLE, Kind.CROSS):
            for S in itertools.combinations(g.vertices_of_kind(kind), size):
                w = make_witness(g, profile, S)
                if w is not None:
                    return w
    return None


def q_sweep(g: RotationGraph, q_values) -> dict:
    return {q: max_flow_plan(g, q) for q in q_values}
