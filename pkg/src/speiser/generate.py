"""Small-graph generation: exhaustive bipartite families, embeddings, mutations."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Optional

import networkx as nx

from .graph import GraphBuilder, Kind, RotationGraph


def from_networkx(nxg: nx.Graph, kinds: dict, name: str = "") -> Optional[RotationGraph]:
    """Embed a simple planar bipartite graph; ``None`` when it is not planar."""
    planar, emb = nx.check_planarity(nxg)
    if not planar:
        return None
    b = GraphBuilder(name=name, source="generated")
    for v in nxg.nodes:
        b.vertex(v, kinds[v])
    dart = {}
    for u, v in nxg.edges:
        a, c = b.edge(u, v)
        dart[(u, v)], dart[(v, u)] = a, c
    for v in nxg.nodes:
        if nxg.degree(v) == 0:
            continue
        # networkx lists neighbours clockwise; rotations here are counterclockwise
        cw = list(emb.neighbors_cw_order(v))
        b.order(v, [dart[(v, w)] for w in reversed(cw)])
    return b.build()


def bipartite_graphs(max_side: int = 3, require_connected: bool = True,
                     min_degree: int = 1) -> Iterator[RotationGraph]:
    """All connected planar simple bipartite graphs with at most ``max_side``
    vertices per side, one representative per isomorphism class."""
    seen: list = []
    for a in range(1, max_side + 1):
        for b in range(1, max_side + 1):
            circles = [f"o{i}" for i in range(1, a + 1)]
            crosses = [f"x{i}" for i in range(1, b + 1)]
            pairs = [(u, w) for u in circles for w in crosses]
            for m in range(max(a + b - 1, 1), len(pairs) + 1):
                for chosen in itertools.combinations(pairs, m):
                    nxg = nx.Graph()
                    nxg.add_nodes_from(circles, kind="circle")
                    nxg.add_nodes_from(crosses, kind="cross")
                    nxg.add_edges_from(chosen)
                    if require_connected and not nx.is_connected(nxg):
                        continue
                    if min(d for _, d in nxg.degree) < min_degree:
                        continue
                    if any(nx.is_isomorphic(nxg, h, node_match=_same_kind) for h in seen
                           if h.number_of_edges() == m and len(h) == len(nxg)):
                        continue
                    seen.append(nxg)
                    kinds = {v: nxg.nodes[v]["kind"] for v in nxg.nodes}
                    g = from_networkx(nxg, kinds, name=f"bip-{a}+{b}-{len(seen)}")
                    if g is not None:
                        yield g


def _same_kind(x, y) -> bool:
    return x["kind"] == y["kind"]


def random_graph(rng: random.Random, max_side: int = 4, max_extra: int = 4) -> RotationGraph:
    """A random connected planar bipartite multigraph built by local moves."""
    b = GraphBuilder(source="random")
    b.vertex(0, "circle").vertex(1, "cross")
    b.edge(0, 1)
    g = b.build()
    for _ in range(rng.randint(0, 2 * max_side + max_extra)):
        g = random_mutation(rng, g)
    return g


def random_mutation(rng: random.Random, g: RotationGraph) -> RotationGraph:
    """Apply one planarity-preserving move: pendant vertex, parallel copy, or
    chord across a face between opposite-kind corners."""
    move = rng.choice(("pendant", "parallel", "chord", "subdivide"))
    rotations = {v: list(r) for v, r in g.rotations.items()}
    kinds = dict(g.kinds)
    twins = dict(g.twins)
    fresh = g.next_dart_id()
    darts = list(g.darts)

    if move == "parallel" and g.edges():
        a, b = rng.choice(g.edges())
        na, nb = fresh, fresh + 1
        ra, rb = rotations[g.vertex_of(a)], rotations[g.vertex_of(b)]
        ra.insert(ra.index(a) + 1, na)
        rb.insert(rb.index(b), nb)
        twins[na], twins[nb] = nb, na
    elif move == "chord":
        f = rng.choice(g.faces)
        corners = [d for d in f.darts]
        pairs = [(x, y) for x, y in itertools.combinations(corners, 2)
                 if g.kind_of_dart(x) is not g.kind_of_dart(y)
                 and g.vertex_of(x) != g.vertex_of(y)]
        if not pairs:
            return g
        x, y = rng.choice(pairs)
        # a chord from the corner (x, sigma x) to the corner (y, sigma y) inside f
        na, nb = fresh, fresh + 1
        rx, ry = rotations[g.vertex_of(x)], rotations[g.vertex_of(y)]
        rx.insert(rx.index(x) + 1, na)
        ry.insert(ry.index(y) + 1, nb)
        twins[na], twins[nb] = nb, na
    elif move == "subdivide" and g.edges():
        a, b = rng.choice(g.edges())
        u, w = g.vertex_of(a), g.vertex_of(b)
        # replace u-w by u-m-w' ... keep bipartite: insert two vertices m (other of u), n (kind of u)
        m, n = _fresh_vertex(kinds), None
        kinds[m] = g.kinds[u].other
        n = _fresh_vertex(kinds)
        kinds[n] = g.kinds[u]
        d1, d2, d3, d4 = fresh, fresh + 1, fresh + 2, fresh + 3
        # a now points to m; m: [d1 (to u), d2 (to n)]; n: [d3 (to m), d4 (to w)]; b points to n
        rotations[m] = [d1, d2]
        rotations[n] = [d3, d4]
        twins[a], twins[d1] = d1, a
        twins[d2], twins[d3] = d3, d2
        twins[d4], twins[b] = b, d4
    else:
        d = rng.choice(darts)
        v = g.vertex_of(d)
        p = _fresh_vertex(kinds)
        kinds[p] = g.kinds[v].other
        na, nb = fresh, fresh + 1
        rv = rotations[v]
        rv.insert(rv.index(d) + 1, na)
        rotations[p] = [nb]
        twins[na], twins[nb] = nb, na
    return RotationGraph(kinds, rotations, twins, meta=g.meta)


def _fresh_vertex(kinds: dict) -> int:
    ints = [v for v in kinds if isinstance(v, int)]
    return max(ints, default=-1) + 1
