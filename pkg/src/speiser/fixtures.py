"""Hand-encoded graphs used by the bundled corpus and the tests.

Most fixtures are laid out in the plane and their rotations are read off by
sorting incident directions by angle, which keeps hand encoding honest about
planarity.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

from .graph import EndDescriptor, GraphBuilder, Kind, RotationGraph


class Layout:
    """Vertices with coordinates; edges, ends and stubs attached by direction."""

    def __init__(self, period: Optional[tuple] = None, **meta):
        self.pos: dict = {}
        self.kinds: dict = {}
        self.items: dict = {}      # vertex -> list of (angle, tiebreak, darts)
        self.b = GraphBuilder(**meta)
        self.period = period

    def vertex(self, v, kind: str, x: float, y: float) -> "Layout":
        self.pos[v] = (x, y)
        self.kinds[v] = kind
        self.items[v] = []
        self.b.vertex(v, kind)
        return self

    def _angle(self, u, v, shift: int) -> tuple:
        (x0, y0), (x1, y1) = self.pos[u], self.pos[v]
        if shift:
            x1 += shift * self.period[0]
            y1 += shift * self.period[1]
        return math.atan2(y1 - y0, x1 - x0), math.atan2(y0 - y1, x0 - x1)

    def edge(self, u, v, width: int = 1, shift: int = 0) -> list:
        """``width`` parallel edges; with ``shift=1`` they go from ``u`` in one
        period to ``v`` in the next."""
        at_u, at_v = self._angle(u, v, shift)
        pairs = [self.b.link(u, v) if shift else self.b.edge(u, v) for _ in range(width)]
        us = [a for a, _ in pairs]
        vs = [c for _, c in pairs][::-1]
        self.items[u].append((at_u, us))
        self.items[v].append((at_v, vs))
        return pairs

    def end(self, v, rho1: int, rho2: int, angle: float) -> int:
        d = self.b.end(v, rho1, rho2)
        self.items[v].append((angle, [d]))
        return d

    def stub(self, v, angle: float) -> int:
        d = self.b.stub(v)
        self.items[v].append((angle, [d]))
        return d

    def build(self) -> RotationGraph:
        for v, items in self.items.items():
            order = []
            for _, darts in sorted(items, key=lambda t: t[0]):
                order.extend(darts)
            self.b.order(v, order)
        return self.b.build()


UP, DOWN, LEFT, RIGHT = math.pi / 2, -math.pi / 2, math.pi, 0.0


# -- N-functions --------------------------------------------------------------

def exp_ladder() -> RotationGraph:
    """The bi-infinite ladder of index 2 (exp, tanh)."""
    lay = Layout(name="exp-ladder", infinity_label=1)
    lay.vertex("o", "circle", 0, 0)
    lay.end("o", 1, 1, RIGHT)
    lay.end("o", 1, 1, LEFT)
    return lay.build()


def star(n_ends: int, q: int, name: str) -> RotationGraph:
    lay = Layout(name=name)
    lay.vertex("o", "circle", 0, 0)
    for k in range(n_ends):
        lay.end("o", 1, q - 1, 2 * math.pi * k / n_ends - math.pi + 1e-9)
    return lay.build()


def airy() -> RotationGraph:
    return star(3, 3, "airy")


def w4() -> RotationGraph:
    """Index 3, four ends: two on each extremity of an alternating ladder segment."""
    lay = Layout(name="w4")
    n = 10
    for i in range(n):
        lay.vertex(f"v{i + 1}", "circle" if i % 2 == 0 else "cross", i, 0)
    for i in range(n - 1):
        lay.edge(f"v{i + 1}", f"v{i + 2}", 1 if i % 2 == 0 else 2)
    lay.end("v1", 1, 2, 3 * math.pi / 4)
    lay.end("v1", 1, 2, -3 * math.pi / 4)
    lay.end(f"v{n}", 1, 2, math.pi / 4)
    lay.end(f"v{n}", 1, 2, -math.pi / 4)
    return lay.build()


def fig4_a() -> RotationGraph:
    return star(4, 4, "fig-4-a")


def fig4_b() -> RotationGraph:
    lay = Layout(name="fig-4-b")
    lay.vertex("o", "circle", 0, 0).vertex("x", "cross", 1, 0)
    lay.edge("o", "x")
    lay.end("o", 1, 3, 2 * math.pi / 3)
    lay.end("o", 2, 2, -2 * math.pi / 3)
    lay.end("x", 2, 2, math.pi / 3)
    lay.end("x", 1, 3, -math.pi / 3)
    return lay.build()


def fig4_c() -> RotationGraph:
    lay = Layout(name="fig-4-c")
    lay.vertex("o1", "circle", 0, 0).vertex("x", "cross", 1, 0).vertex("o2", "circle", 2, 0)
    lay.edge("o1", "x", 2)
    lay.edge("x", "o2", 2)
    lay.end("o1", 1, 3, 2 * math.pi / 3)
    lay.end("o1", 1, 3, -2 * math.pi / 3)
    lay.end("o2", 1, 3, math.pi / 3)
    lay.end("o2", 1, 3, -math.pi / 3)
    return lay.build()


def fig4_d() -> RotationGraph:
    lay = Layout(name="fig-4-d")
    lay.vertex("o", "circle", 0, 0).vertex("x", "cross", 1, 0)
    lay.edge("o", "x")
    lay.end("o", 1, 2, 2 * math.pi / 3)
    lay.end("o", 1, 2, -2 * math.pi / 3)
    lay.end("x", 1, 2, math.pi / 3)
    lay.end("x", 1, 2, -math.pi / 3)
    return lay.build()


# -- periodic motifs ------------------------------------------------------------

def exp_exp() -> RotationGraph:
    """Index 3: a horizontal line with one end per vertex above it; the single
    face below the line is unbounded."""
    lay = Layout(period=(2, 0), name="exp-exp")
    lay.vertex("p0", "circle", 0, 0).vertex("p1", "cross", 1, 0)
    lay.edge("p0", "p1")
    lay.edge("p1", "p0", shift=1)
    lay.end("p0", 1, 2, UP)
    lay.end("p1", 1, 2, UP)
    return lay.build()


def exp_sin() -> RotationGraph:
    """Index 4: a horizontal strip of squares with ends above and below."""
    lay = Layout(period=(2, 0), name="exp-sin")
    lay.vertex("ta", "circle", 0, 1).vertex("ba", "cross", 0, 0)
    lay.vertex("tb", "cross", 1, 1).vertex("bb", "circle", 1, 0)
    lay.edge("ta", "ba")
    lay.edge("tb", "bb")
    lay.edge("ta", "tb")
    lay.edge("ba", "bb")
    lay.edge("tb", "ta", shift=1)
    lay.edge("bb", "ba", shift=1)
    for v, a in (("ta", UP), ("tb", UP), ("ba", DOWN), ("bb", DOWN)):
        lay.end(v, 1, 3, a)
    return lay.build()


def sin_exp_sin() -> RotationGraph:
    """Index 4: squares alternating with octagons along a strip."""
    lay = Layout(period=(4, 0), name="sin-exp-sin")
    lay.vertex("ta", "circle", 0, 1).vertex("ba", "cross", 0, 0)
    lay.vertex("tb", "cross", 1, 1).vertex("bb", "circle", 1, 0)
    lay.vertex("u1", "circle", 2, 1).vertex("u2", "cross", 3, 1)
    lay.vertex("l1", "cross", 2, 0).vertex("l2", "circle", 3, 0)
    lay.edge("ta", "ba")
    lay.edge("tb", "bb")
    lay.edge("ta", "tb")
    lay.edge("ba", "bb")
    lay.edge("tb", "u1")
    lay.edge("u1", "u2", 3)
    lay.edge("u2", "ta", shift=1)
    lay.edge("bb", "l1")
    lay.edge("l1", "l2", 3)
    lay.edge("l2", "ba", shift=1)
    for v, a in (("ta", UP), ("tb", UP), ("ba", DOWN), ("bb", DOWN)):
        lay.end(v, 1, 3, a)
    return lay.build()


# -- truncated --------------------------------------------------------------

def eph() -> RotationGraph:
    """Index 4: a lattice piece on the right, one end in the middle and a
    4-regular tree on the left, all cut off by stubs."""
    lay = Layout(name="eph")
    lay.vertex("v", "circle", 0, 0)
    lay.end("v", 2, 2, UP)
    lay.vertex("l1", "cross", 1, 0).vertex("a", "circle", 2, 0)
    lay.vertex("b", "cross", 2, -1).vertex("c", "circle", 1, -1)
    lay.edge("v", "l1")
    lay.edge("l1", "a")
    lay.edge("a", "b")
    lay.edge("b", "c")
    lay.edge("c", "l1")
    lay.stub("l1", UP)
    lay.stub("a", UP)
    lay.stub("a", RIGHT)
    lay.stub("b", RIGHT)
    lay.stub("b", DOWN)
    lay.stub("c", DOWN)
    lay.stub("c", LEFT + 0.3)
    lay.vertex("t", "cross", -1, 0)
    lay.edge("v", "t")
    for k, y in enumerate((1, 0, -1)):
        child = f"t{k + 1}"
        lay.vertex(child, "circle", -2, y)
        lay.edge("t", child)
        for a in (LEFT - 0.6, LEFT, LEFT + 0.6):
            lay.stub(child, a if a <= math.pi else a - 2 * math.pi)
    return lay.build()


# -- finite ------------------------------------------------------------------

_FIG10_ROT = {
    "o1": (0, 4, 6, 2, 8), "o2": (10, 14, 12), "o3": (16, 18), "o4": (20, 22),
    "x1": (1, 21, 3, 11), "x2": (5, 13, 17), "x3": (7, 19, 15), "x4": (9, 23),
}


def thurston_fig10() -> RotationGraph:
    """Pre-Speiser graph with valences up to 5 and six non-digon faces."""
    twins = {}
    for i in range(0, 24, 2):
        twins[i], twins[i + 1] = i + 1, i
    kinds = {v: Kind.CIRCLE if v[0] == "o" else Kind.CROSS for v in _FIG10_ROT}
    return RotationGraph(kinds, {v: list(r) for v, r in _FIG10_ROT.items()}, twins,
                         meta={"name": "thurston-fig10"})


def no_local_balance() -> RotationGraph:
    """The figure-10 graph with one edge replaced by a gadget whose two inner
    crosses x2, x3 see only the circles o4, o5."""
    base = thurston_fig10()
    ren = {"o1": "o2", "o2": "o3", "o3": "o6", "o4": "o7",
           "x1": "x4", "x2": "x5", "x3": "x6", "x4": "x7"}
    rotations = {ren[v]: list(r) for v, r in base.rotations.items()}
    kinds = {ren[v]: k for v, k in base.kinds.items()}
    twins = dict(base.twins)
    a, b = 8, 9                      # the edge between old o1 and old x4
    del twins[a], twins[b]
    d = iter(range(100, 200))
    c4x2, x2c4, c4x3, x3c4 = next(d), next(d), next(d), next(d)
    c5x2, x2c5, c5x3, x3c5 = next(d), next(d), next(d), next(d)
    c1x1, x1c1, c1b, c4x1, x1c4, c5b, bc5, x1a = (next(d) for _ in range(8))
    rotations.update({
        "x1": [x1c1, x1c4, x1a], "x2": [x2c4, x2c5], "x3": [x3c4, x3c5],
        "o1": [c1x1, c1b], "o4": [c4x2, c4x3, c4x1], "o5": [c5x2, c5b, c5x3],
    })
    rotations["x7"].append(bc5)
    kinds.update({"x1": Kind.CROSS, "x2": Kind.CROSS, "x3": Kind.CROSS,
                  "o1": Kind.CIRCLE, "o4": Kind.CIRCLE, "o5": Kind.CIRCLE})
    for p, r in ((a, x1a), (b, c1b), (x1c1, c1x1), (x1c4, c4x1), (c5b, bc5),
                 (c4x2, x2c4), (c4x3, x3c4), (c5x2, x2c5), (c5x3, x3c5)):
        twins[p], twins[r] = r, p
    order = ["o1", "o2", "o3", "o4", "o5", "o6", "o7", "x1", "x2", "x3", "x4", "x5", "x6", "x7"]
    g = RotationGraph({v: kinds[v] for v in order}, {v: rotations[v] for v in order}, twins,
                      meta={"name": "no-local-balance"})
    return g.normalized()


def trivial(q: int) -> RotationGraph:
    """One circle and one cross joined by q parallel edges."""
    lay = Layout(name=f"trivial-{q}")
    lay.vertex("o", "circle", 0, 0).vertex("x", "cross", 1, 0)
    lay.edge("o", "x", q)
    return lay.build()


def unrolled(g: RotationGraph, steps: int) -> RotationGraph:
    """Make ``steps`` rungs of every end explicit."""
    from .decomposition import unroll_end

    for _ in range(steps):
        for e in list(g.ends):
            g = unroll_end(g, e.attach)
    return g


def nevanlinna_p2() -> RotationGraph:
    return unrolled(exp_ladder(), 2).replace(meta={"name": "nevanlinna-p2"})


def nevanlinna_p3() -> RotationGraph:
    return unrolled(airy(), 1).replace(meta={"name": "nevanlinna-p3"})


def all_fixtures() -> dict:
    return {
        "exp-ladder": exp_ladder, "airy": airy, "w4": w4,
        "fig-4-a": fig4_a, "fig-4-b": fig4_b, "fig-4-c": fig4_c, "fig-4-d": fig4_d,
        "exp-exp": exp_exp, "exp-sin": exp_sin, "sin-exp-sin": sin_exp_sin, "eph": eph,
        "thurston-fig10": thurston_fig10, "no-local-balance": no_local_balance,
        "nevanlinna-p2": nevanlinna_p2, "nevanlinna-p3": nevanlinna_p3,
    }
