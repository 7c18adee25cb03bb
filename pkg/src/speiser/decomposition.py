"""Face classification, logarithmic ends, nucleus and structural tags."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import EndConditionViolated, OddFace
from .graph import EndDescriptor, Kind, RotationGraph, _j
from .labelling import Labelling, face_label_map

ORDINARY, ALGEBRAIC, LOGARITHMIC, TRUNCATED = "ordinary", "algebraic", "logarithmic", "truncated"
INF = "inf"


@dataclass(frozen=True)
class FaceClass:
    face: int
    kind: str
    m: Optional[int] = None          # ramification index for algebraic faces
    label: Optional[int] = None
    periodic: bool = False           # stands for one face per period

    @property
    def multiplicity(self):
        return INF if self.kind == LOGARITHMIC else self.m

    def as_dict(self) -> dict:
        out = {"face": self.face, "class": self.kind}
        if self.m is not None:
            out["m"] = self.m
        if self.label is not None:
            out["label"] = self.label
        if self.periodic:
            out["periodic"] = True
        return out


@dataclass(frozen=True)
class LogEnd:
    vertex: object
    end: EndDescriptor
    flanks: Optional[tuple] = None   # labels of the two unbounded faces beside the ladder
    tower: Optional[str] = None      # "exponential" or "h-tangent" when labels are known

    @property
    def rho1(self) -> int:
        return self.end.rho1

    @property
    def rho2(self) -> int:
        return self.end.rho2

    def as_dict(self) -> dict:
        out = {"vertex": _j(self.vertex), **self.end.as_dict()}
        if self.flanks is not None:
            out["flanks"] = list(self.flanks)
            out["tower"] = self.tower
        return out


@dataclass
class Nucleus:
    """What remains after removing the ends; loose darts mark where they hung."""

    kinds: dict
    rotations: dict
    twins: dict
    loose: tuple

    @property
    def vertices(self) -> list:
        return list(self.rotations)

    @property
    def num_vertices(self) -> int:
        return len(self.rotations)

    @property
    def num_edges(self) -> int:
        return len(self.twins) // 2

    def as_dict(self) -> dict:
        return {
            "vertices": [{"id": _j(v), "kind": self.kinds[v].value, "rotation": list(r)}
                        for v, r in self.rotations.items()],
            "twins": sorted([a, b] for a, b in self.twins.items() if a < b),
            "loose": list(self.loose),
        }


@dataclass
class DecompositionReport:
    graph: RotationGraph
    nucleus: Nucleus
    ends: list
    faces: list
    divisor: list
    tags: set
    counts: dict
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "nucleus": self.nucleus.as_dict(),
            "ends": [e.as_dict() for e in self.ends],
            "divisor": self.divisor,
            "tags": sorted(self.tags),
            "counts": self.counts,
            "warnings": list(self.warnings),
        }


# -- faces ------------------------------------------------------------------

def _stub_faces(g: RotationGraph) -> set:
    if not g.stubs:
        return set()
    return {f.index for f in g.faces if any(d in g.stubs for d in f.darts)
            or f.entry in g.stubs}


def classify_faces(g: RotationGraph, L: Optional[Labelling] = None) -> list:
    labels = face_label_map(g, L) if L is not None else {}
    cut = _stub_faces(g)
    out = []
    for f in g.faces:
        lab = labels.get(f.index)
        if f.index in cut:
            out.append(FaceClass(f.index, TRUNCATED, label=lab))
        elif not f.bounded:
            out.append(FaceClass(f.index, LOGARITHMIC, label=lab,
                                 periodic=g.is_periodic and f.entry is not None))
        else:
            n = len(f.darts)
            if n % 2:
                raise OddFace(f"face {f.index} has {n} sides", face=f.index, sides=n)
            kind = ORDINARY if n == 2 else ALGEBRAIC
            out.append(FaceClass(f.index, kind, m=None if n == 2 else n // 2, label=lab,
                                 periodic=g.is_periodic))
    return out


# -- ends -------------------------------------------------------------------

def _regular_q(g: RotationGraph) -> Optional[int]:
    vals = set(g.valences().values())
    return vals.pop() if len(vals) == 1 else None


def verify_ends(g: RotationGraph) -> None:
    q = _regular_q(g)
    for e in g.ends:
        if q is not None and e.q != q:
            raise EndConditionViolated(
                f"end at dart {e.attach} has widths {e.rho1}+{e.rho2} != {q}",
                condition="iii", attach=e.attach)
        v = g.vertex_of(e.attach)
        if e.first_kind is g.kind(v):
            raise EndConditionViolated("end does not alternate kinds", condition="ii",
                                       attach=e.attach)


def _absorbable(g: RotationGraph, v) -> Optional[tuple]:
    """If ``v`` is just the first rung of a longer ladder, return
    ``(end, bundle darts at the neighbour in ccw order, neighbour)``."""
    rot = list(g.rotations[v])
    ends = [g.end_at(d) for d in rot if g.end_at(d) is not None]
    if len(ends) != 1 or any(d in g.stubs for d in rot):
        return None
    end = ends[0]
    i = rot.index(end.attach)
    rest = rot[i + 1:] + rot[:i]
    if not rest or any(d not in g.twins for d in rest):
        return None
    nbrs = {g.vertex_of(g.twins[d]) for d in rest}
    if len(nbrs) != 1:
        return None
    b = nbrs.pop()
    if len(rest) != end.rho2:
        return None
    far = [g.twins[d] for d in reversed(rest)]
    rb = list(g.rotations[b])
    k = rb.index(far[0])
    if rb[k:k + len(far)] != far and (rb + rb)[k:k + len(far)] != far:
        return None
    if len(rb) == len(far):
        return None  # b would be left with nothing but the end
    return end, far, b


def _absorb(g: RotationGraph, v, hit: tuple) -> RotationGraph:
    end, far, b = hit
    rotations = {u: list(r) for u, r in g.rotations.items() if u != v}
    kinds = {u: k for u, k in g.kinds.items() if u != v}
    keep = far[0]
    rotations[b] = [d for d in rotations[b] if d == keep or d not in far]
    twins = {d: t for d, t in g.twins.items()
             if g.vertex_of(d) != v and g.vertex_of(t) != v}
    new_end = EndDescriptor(keep, len(far), end.rho1, g.kind(v))
    ends = [e for e in g.ends if e is not end] + [new_end]
    return RotationGraph(kinds, rotations, twins, ends, g.stubs, g.links, g.meta)


def maximize_ends(g: RotationGraph) -> RotationGraph:
    """Grow every declared end over vertices that merely continue its ladder."""
    verify_ends(g)
    while g.num_vertices > 1:
        for v in g.rotations:
            hit = _absorbable(g, v)
            if hit is not None:
                g = _absorb(g, v, hit)
                break
        else:
            break
    if g.num_vertices == 1 and len(g.ends) == 2:
        (v,) = g.rotations
        if g.kind(v) is Kind.CROSS:
            # a bi-infinite ladder: report it from one of its circle rungs
            g = unroll_end(g, g.ends[0].attach)
            g = _absorb(g, v, _absorbable(g, v))
    return g


def unroll_end(g: RotationGraph, attach: int) -> RotationGraph:
    """Make the first rung of an end explicit (inverse of one absorption step)."""
    end = g.end_at(attach)
    if end is None:
        raise EndConditionViolated(f"dart {attach} carries no end", condition="i")
    v = g.vertex_of(attach)
    fresh = g.next_dart_id()
    ints = [u for u in g.rotations if isinstance(u, int)]
    new_v = max(ints, default=-1) + 1 if ints or not g.rotations else f"r{fresh}"
    while new_v in g.rotations:
        new_v = f"r{fresh}_{new_v}"
    w = end.rho1
    near = list(range(fresh, fresh + w))          # at v, ccw
    far = list(range(fresh + w, fresh + 2 * w))   # at new_v, ccw (reverse pairing)
    tail = fresh + 2 * w
    rotations = {u: list(r) for u, r in g.rotations.items()}
    rv = rotations[v]
    i = rv.index(attach)
    rv[i:i + 1] = near
    twins = dict(g.twins)
    for a, b in zip(near, reversed(far)):
        twins[a], twins[b] = b, a
    rotations[new_v] = [tail] + far
    kinds = dict(g.kinds)
    kinds[new_v] = end.first_kind
    ends = [e for e in g.ends if e is not end]
    ends.append(EndDescriptor(tail, end.rho2, end.rho1, g.kind(v)))
    return RotationGraph(kinds, rotations, twins, ends, g.stubs, g.links, g.meta)


def _flanks(g: RotationGraph, labels: dict, end: EndDescriptor) -> tuple:
    fo = g.face_of
    return labels[fo[g.sigma_inv(end.attach)]], labels[fo[end.attach]]


def _restrict(L: Labelling, h: RotationGraph) -> Labelling:
    return Labelling(L.q, {d: L.labels[d] for d in h.darts}, L.name)


def find_log_ends(g: RotationGraph, L: Optional[Labelling] = None) -> tuple:
    """Returns ``(maximal graph, ends)``."""
    h = maximize_ends(g)
    labels = None
    if L is not None:
        labels = face_label_map(h, _restrict(L, h))
    infinity = g.meta.get("infinity_label")
    ends = []
    for e in h.ends:
        flanks = tower = None
        if labels is not None:
            flanks = _flanks(h, labels, e)
            if infinity is not None:
                tower = "exponential" if infinity in flanks else "h-tangent"
            else:
                tower = "h-tangent"
        ends.append(LogEnd(h.vertex_of(e.attach), e, flanks, tower))
    return h, ends


def nucleus(g: RotationGraph, ends: list) -> Nucleus:
    if g.num_vertices == 1 and len(ends) == 2:
        return Nucleus({}, {}, {}, ())   # one bi-infinite ladder: nothing is left
    loose = tuple(sorted(e.end.attach for e in ends))
    return Nucleus(dict(g.kinds), {v: list(r) for v, r in g.rotations.items()},
                   dict(g.twins), loose)


def reassemble(n: Nucleus, ends: list, template: RotationGraph) -> RotationGraph:
    """Glue the ends back onto the nucleus."""
    if not n.rotations:
        return template
    return RotationGraph(n.kinds, n.rotations, n.twins, [e.end for e in ends],
                         template.stubs, template.links, template.meta)


# -- divisor and tags -------------------------------------------------------

def branch_divisor(g: RotationGraph, L: Optional[Labelling] = None,
                   classes: Optional[list] = None) -> tuple:
    classes = classes if classes is not None else classify_faces(g, L)
    entries, by_label = [], {}
    p = r = 0
    for c in classes:
        if c.kind in (ORDINARY, TRUNCATED):
            continue
        entries.append({"face": c.face, "label": c.label, "m": c.multiplicity,
                        **({"periodic": True} if c.periodic else {})})
        if c.kind == LOGARITHMIC:
            p += 1
        else:
            r += 1
        if c.label is not None:
            by_label[c.label] = by_label.get(c.label, 0) + 1
    counts = {"p": p, "r": r, "delta": p + r,
              "q": _regular_q(g),
              "by_label": {str(k): by_label[k] for k in sorted(by_label)}}
    if g.is_periodic:
        counts["per_period"] = True
    if g.is_truncated:
        counts["truncated"] = True
    return entries, counts


def classify_structure(g: RotationGraph, classes: list) -> set:
    if g.is_truncated:
        return {"Unknown"}
    if g.is_finite:
        tags = {"Rational", "Elliptic"}
        degree = len(g.vertices_of_kind(Kind.CIRCLE))
        if any(c.kind == ALGEBRAIC and c.m == degree for c in classes):
            tags.add("Polynomial")
        return tags
    unbounded_finite = not any(c.kind == LOGARITHMIC and c.periodic for c in classes)
    bounded = [c for c in classes if c.kind in (ORDINARY, ALGEBRAIC)]
    digons_only = all(c.kind == ORDINARY for c in bounded)
    non_digon_finite = unbounded_finite and not any(
        c.kind == ALGEBRAIC and c.periodic for c in classes)
    tags = set()
    if unbounded_finite and digons_only:
        tags.add("N-function")
    if non_digon_finite:
        tags.add("FiniteSpeiser")
    tags.add("Parabolic" if tags else "Unknown")
    return tags


def decompose(g: RotationGraph, L: Optional[Labelling] = None) -> DecompositionReport:
    h, ends = find_log_ends(g, L)
    classes = classify_faces(h, _restrict(L, h) if L is not None else None)
    entries, counts = branch_divisor(h, classes=classes)
    tags = classify_structure(h, classes)
    nuc = nucleus(h, ends)
    counts.update({"ends": len(ends), "nucleus_vertices": nuc.num_vertices,
                   "loose_darts": len(nuc.loose)})
    warnings = []
    if "FiniteSpeiser" in tags and len(ends) == 1:
        warnings.append("single logarithmic end on a finite Speiser pattern")
    unbounded = sum(1 for c in classes if c.kind in (LOGARITHMIC, TRUNCATED))
    if len(ends) > unbounded and not g.is_truncated:  # pragma: no cover - structural
        warnings.append("more ends than unbounded faces")
    return DecompositionReport(h, nuc, ends, classes, entries, tags, counts, warnings)
