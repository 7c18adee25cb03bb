"""Tessellation side: t-graphs and A-maps, duality with (pre-)Speiser graphs,
edge subdivision and valence-2 forgetting.

Duals share dart ids with their primal: the dual of a map (sigma, alpha) is
(phi, alpha), so the dual vertex of a face rotates through that face's walk.
Applying this twice gives a map isomorphic to the original through alpha.
"""

from __future__ import annotations

from collections import deque
from enum import Enum
from typing import Mapping, Optional

from .errors import (
    BadTwinPairing,
    LabellingInconsistent,
    NotTwoColorable,
    UnsupportedInfinite,
    WouldCreateLoop,
)
from .graph import CombinatorialMap, Kind, RotationGraph, _j, is_isomorphic
from .labelling import Labelling, face_label_map


class Color(str, Enum):
    BLUE = "blue"
    GREY = "grey"

    @property
    def other(self) -> "Color":
        return Color.GREY if self is Color.BLUE else Color.BLUE


class TGraph(CombinatorialMap):
    """A finite map whose faces (tiles) carry a proper blue/grey colouring."""

    def __init__(self, rotations, twins, colors: Mapping[int, Color],
                 vertex_labels: Optional[Mapping] = None, q: Optional[int] = None,
                 meta: Optional[Mapping] = None):
        super().__init__(rotations, twins)
        if self.loose_darts:
            raise UnsupportedInfinite("tessellation maps must be finite (every dart twinned)")
        self.colors = {int(k): Color(c) for k, c in colors.items()}
        self.vertex_labels = dict(vertex_labels) if vertex_labels else None
        self.q = q
        self.meta = dict(meta or {})
        if set(self.colors) != {f.index for f in self.faces}:
            raise NotTwoColorable("face colouring must cover every face exactly once")
        for d in self.darts:
            if self.colors[self.face_of[d]] is self.colors[self.face_of[self.twins[d]]]:
                raise NotTwoColorable(f"edge at dart {d} has the same colour on both sides",
                                      dart=d)

    def color_of_dart(self, d: int) -> Color:
        """Colour of the tile on the left of dart ``d``."""
        return self.colors[self.face_of[d]]

    def oriented_darts(self) -> list:
        """One dart per edge, oriented with the blue tile on its left."""
        return [d for d in self.darts if self.color_of_dart(d) is Color.BLUE]

    def tiles(self, color: Optional[Color] = None) -> list:
        return [f for f in self.faces if color is None or self.colors[f.index] is color]

    def valence_profile(self) -> dict:
        return {v: len(r) for v, r in self.rotations.items()}

    def kind(self) -> str:
        """'t-graph', 'A-map' (valence-2 vertices present) or 'invalid'."""
        vals = set(self.valence_profile().values())
        if any(k % 2 or k < 2 for k in vals):
            return "invalid"
        return "A-map" if 2 in vals else "t-graph"

    def is_homogeneous(self, q: int) -> bool:
        return all(len(f.darts) == q for f in self.faces)

    def color_data(self) -> dict:
        return {d: self.color_of_dart(d).value for d in self.darts}

    def label_data(self) -> dict:
        if self.vertex_labels is None:
            return self.color_data()
        return {d: (self.color_of_dart(d).value, self.vertex_labels[self.vertex_of(d)])
                for d in self.darts}

    def to_dict(self) -> dict:
        out = {
            "vertices": [{"id": _j(v), "rotation": list(r)} for v, r in self.rotations.items()],
            "twins": [[a, b] for a, b in self.edges()],
            "face_colors": [[i, self.colors[i].value] for i in sorted(self.colors)],
        }
        if self.vertex_labels is not None:
            out["vertex_labels"] = [[_j(v), self.vertex_labels[v]] for v in self.rotations]
            out["q"] = self.q
        out["meta"] = dict(self.meta)
        return out

    def __repr__(self) -> str:
        return (f"TGraph(V={self.num_vertices}, E={self.num_edges}, "
                f"tiles={len(self.faces)}, kind={self.kind()})")


def two_coloring(m: CombinatorialMap, blue_face: int = 0) -> dict:
    """BFS over face adjacency starting from ``blue_face``."""
    colors = {blue_face: Color.BLUE}
    queue = deque([blue_face])
    walks = {f.index: f.darts for f in m.faces}
    while queue:
        f = queue.popleft()
        for d in walks[f]:
            t = m.alpha(d)
            if t is None:
                continue
            g = m.face_of[t]
            want = colors[f].other
            if g not in colors:
                colors[g] = want
                queue.append(g)
            elif colors[g] is not want:
                raise NotTwoColorable(f"faces {f} and {g} are forced to the same colour",
                                      faces=[f, g])
    if len(colors) != len(walks):  # pragma: no cover - connected maps only
        raise NotTwoColorable("face adjacency is disconnected")
    return colors


def tgraph_from_dict(spec: Mapping, blue_face: Optional[int] = None) -> TGraph:
    rotations, twins = {}, {}
    for entry in spec["vertices"]:
        vid = entry["id"]
        rotations[tuple(vid) if isinstance(vid, list) else vid] = list(entry["rotation"])
    for a, b in spec.get("twins", []):
        if a in twins or b in twins:
            raise BadTwinPairing(f"dart in pair {[a, b]} already paired")
        twins[a], twins[b] = b, a
    base = CombinatorialMap(rotations, twins)
    if blue_face is not None or "face_colors" not in spec:
        colors = two_coloring(base, blue_face or 0)
    else:
        colors = {int(i): Color(c) for i, c in spec["face_colors"]}
    labels = None
    if spec.get("vertex_labels"):
        labels = {(tuple(v) if isinstance(v, list) else v): int(l)
                  for v, l in spec["vertex_labels"]}
    return TGraph(rotations, twins, colors, labels, spec.get("q"), spec.get("meta"))


def _face_rotations(m: CombinatorialMap) -> dict:
    return {f.index: list(f.darts) for f in m.faces}


def dual(t: TGraph):
    """Pre-Speiser graph of a tessellation.

    Returns ``(graph, refs)`` where ``refs['vertex_of_tile']`` maps each tile
    index to its dual vertex and ``refs['face_of_vertex']`` maps each primal
    vertex to the dual face index around it.
    """
    rotations = _face_rotations(t)
    kinds = {i: (Kind.CIRCLE if t.colors[i] is Color.BLUE else Kind.CROSS) for i in rotations}
    g = RotationGraph(kinds, rotations, t.twins, meta={**t.meta, "dual_of": "tessellation"})
    refs = {"vertex_of_tile": {i: i for i in rotations},
            "face_of_vertex": {v: g.face_of[t.twins[rot[0]]] for v, rot in t.rotations.items()}}
    return g, refs


def primal(s: RotationGraph, labelling: Optional[Labelling] = None) -> TGraph:
    """Tessellation of a finite (pre-)Speiser graph; with a labelling the tile
    corners (dual vertices) carry the face labels."""
    if not s.is_finite:
        raise UnsupportedInfinite("duality is implemented for finite graphs only")
    rotations = _face_rotations(s)
    m = CombinatorialMap(rotations, s.twins)
    colors = {}
    for f in m.faces:
        d = f.darts[0]
        kind = s.kind_of_dart(s.twins[d])
        colors[f.index] = Color.BLUE if kind is Kind.CIRCLE else Color.GREY
    labels = None
    if labelling is not None:
        fmap = face_label_map(s, labelling)
        labels = {i: fmap[i] for i in rotations}
    return TGraph(rotations, s.twins, colors, labels, labelling.q if labelling else None,
                  meta={**s.meta, "primal_of": "speiser"})


def _recolor(old: TGraph, rotations, twins, labels=None, q=None, meta=None) -> TGraph:
    """Build a TGraph whose faces inherit colours from ``old`` through shared darts."""
    m = CombinatorialMap(rotations, twins)
    colors = {}
    for f in m.faces:
        src = next(d for d in f.darts if d in old.face_of)
        colors[f.index] = old.color_of_dart(src)
    return TGraph(rotations, twins, colors, labels, q, meta or old.meta)


def subdivide_edges(t: TGraph, q: Optional[int] = None, labels: Optional[Mapping] = None) -> TGraph:
    """Insert valence-2 vertices so that labels step by one along every edge."""
    labels = dict(labels if labels is not None else (t.vertex_labels or {}))
    q = q if q is not None else t.q
    if q is None or set(labels) != set(t.rotations):
        raise LabellingInconsistent("subdivision needs a label on every vertex and q")
    rotations = {v: list(r) for v, r in t.rotations.items()}
    twins = dict(t.twins)
    new_labels = dict(labels)
    fresh = max(t.darts) + 1
    ints = [v for v in t.rotations if isinstance(v, int)]
    next_vertex = max(ints, default=-1) + 1
    for d in t.oriented_darts():
        e = t.twins[d]
        h, j = labels[t.vertex_of(d)], labels[t.vertex_of(e)]
        gap = (j - h) % q
        if gap == 0:
            raise LabellingInconsistent(f"edge at dart {d} joins two vertices labelled {h}",
                                        dart=d)
        prev = d
        for k in range(1, gap):
            v = next_vertex
            next_vertex += 1
            back, fwd = fresh, fresh + 1
            fresh += 2
            rotations[v] = [back, fwd]
            twins[prev], twins[back] = back, prev
            new_labels[v] = (h + k) % q
            prev = fwd
        twins[prev], twins[e] = e, prev
    a = _recolor(t, rotations, twins, new_labels, q, meta={**t.meta, "subdivided": True})
    if not a.is_homogeneous(q):
        sizes = sorted({len(f.darts) for f in a.faces})
        raise LabellingInconsistent(f"tiles are not all {q}-gons after subdivision: {sizes}",
                                    sizes=sizes)
    return a


def forget_valence2(a: TGraph) -> TGraph:
    rotations = {v: list(r) for v, r in a.rotations.items()}
    twins = dict(a.twins)
    vertex_of = {d: v for v, r in rotations.items() for d in r}
    for v in list(a.rotations):
        rot = rotations[v]
        if len(rot) != 2:
            continue
        d1, d2 = rot
        x, y = twins[d1], twins[d2]
        if vertex_of[x] == vertex_of[y]:
            raise WouldCreateLoop(f"forgetting vertex {v!r} would create a loop", vertex=_j(v))
        twins[x], twins[y] = y, x
        del twins[d1], twins[d2]
        del rotations[v]
    labels = None
    if a.vertex_labels is not None:
        labels = {v: a.vertex_labels[v] for v in rotations}
    return _recolor(a, rotations, twins, labels, a.q, meta={**a.meta, "subdivided": False})


def add_digons(s: RotationGraph, multiplicity: Mapping[int, int]) -> RotationGraph:
    """Nested parallel copies: ``multiplicity`` maps a dart to the number of
    extra edges placed beside its edge."""
    rotations = {v: list(r) for v, r in s.rotations.items()}
    twins = dict(s.twins)
    fresh = s.next_dart_id()
    for a in sorted(multiplicity):
        k = int(multiplicity[a])
        if not k:
            continue
        b = s.twins[a]
        ra, rb = rotations[s.vertex_of(a)], rotations[s.vertex_of(b)]
        new_a = list(range(fresh, fresh + k))
        new_b = list(range(fresh + k, fresh + 2 * k))
        fresh += 2 * k
        i = ra.index(a)
        ra[i + 1:i + 1] = new_a
        j = rb.index(b)
        rb[j:j] = new_b[::-1]
        for da, db in zip(new_a, new_b):
            twins[da], twins[db] = db, da
    return s.replace(rotations=rotations, twins=twins)


def digon_gaps(t: TGraph, q: Optional[int] = None) -> dict:
    """For each dual edge (keyed by its circle-side dart) the number of
    valence-2 vertices subdivision will insert on the primal edge."""
    q = q if q is not None else t.q
    out = {}
    for d in t.oriented_darts():
        h = t.vertex_labels[t.vertex_of(d)]
        j = t.vertex_labels[t.vertex_of(t.twins[d])]
        nu = (j - h) % q - 1
        # in the dual, dart d sits at the tile on its left, which is blue: a circle
        out[d] = nu
    return out


def commuting_square(t: TGraph) -> bool:
    """dual(subdivide(t)) and add_digons(dual(t)) agree up to isomorphism."""
    left, _ = dual(subdivide_edges(t))
    s, _ = dual(t)
    right = add_digons(s, digon_gaps(t))
    return is_isomorphic(left, right)


def labelling_from_tessellation(a: TGraph, s: RotationGraph) -> Labelling:
    """Transport vertex labels of a homogeneous A-map to edge labels of its dual.

    The dual edge crossing the oriented primal edge h -> h+1 carries label h.
    """
    q = a.q
    labels = {}
    for d in a.oriented_darts():
        h = a.vertex_labels[a.vertex_of(d)]
        labels[d] = h % q
        labels[a.twins[d]] = h % q
    return Labelling(q, labels)
