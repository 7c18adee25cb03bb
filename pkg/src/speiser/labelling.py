"""Consistent q-labellings of edges, their verification and minimality descent.

Labels live in Z_q.  Reading a rotation counterclockwise, labels go up by one
at a circle vertex and down by one at a cross vertex; an end dart of width w
covers w consecutive labels starting from its own.  A face whose corners
carry the label pairs {j-1, j} is a j-face; for a walk dart ``d`` this is
``L(sigma(d))`` at a circle and ``L(sigma(d)) + 1`` at a cross.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import (
    EndConditionViolated,
    InconsistentFaceBoundary,
    LabelHasNonDigonFace,
    NotRegular,
    PropagationConflict,
    ValenceTooSmall,
)
from .graph import EndDescriptor, Kind, RotationGraph


@dataclass(frozen=True)
class Labelling:
    q: int
    labels: Mapping[int, int]
    name: str = "Z_q"

    def __getitem__(self, d: int) -> int:
        return self.labels[d]

    def shifted(self, k: int) -> "Labelling":
        return Labelling(self.q, {d: (l + k) % self.q for d, l in self.labels.items()}, self.name)

    def to_dict(self) -> dict:
        return {"q": self.q, "labels": [[d, self.labels[d]] for d in sorted(self.labels)]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Labelling":
        from .errors import InputError

        try:
            q = int(data["q"])
            labels = {int(d): int(l) % q for d, l in data["labels"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed labelling: {exc}") from None
        return cls(q, labels, data.get("name", "Z_q"))


@dataclass(frozen=True)
class QBounds:
    q_min: int
    q_max: float  # int, or math.inf

    @property
    def admissible(self) -> list:
        if math.isinf(self.q_max):
            return []
        return list(range(self.q_min, int(self.q_max) + 1))

    def as_dict(self) -> dict:
        return {"q_min": self.q_min,
                "q_max": "infinite" if math.isinf(self.q_max) else int(self.q_max)}


@dataclass
class LabelVerdict:
    vertex_violations: list = field(default_factory=list)
    face_violations: list = field(default_factory=list)
    failing_labels: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """Invariant (i): the rotation rule holds everywhere."""
        return not self.vertex_violations and not self.face_violations

    @property
    def ok(self) -> bool:
        return self.consistent and not self.failing_labels

    def as_dict(self) -> dict:
        return {"ok": self.ok, "consistent": self.consistent,
                "vertex_violations": self.vertex_violations,
                "face_violations": self.face_violations,
                "failing_labels": self.failing_labels}


@dataclass
class LabellingReport:
    """Outcome of ``construct_labelling``."""

    labelling: Labelling
    verdict: LabelVerdict
    reduced_q: Optional[int] = None
    forgotten: list = field(default_factory=list)
    reduced_graph: Optional[RotationGraph] = None
    reduced_labelling: Optional[Labelling] = None

    @property
    def ok(self) -> bool:
        return self.verdict.ok

    def as_dict(self) -> dict:
        out = {"q": self.labelling.q, "ok": self.ok, "verdict": self.verdict.as_dict(),
               "labelling": self.labelling.to_dict()}
        if self.reduced_q is not None:
            out["reduced_q"] = self.reduced_q
            out["forgotten"] = self.forgotten
        return out


def is_non_digon(face) -> bool:
    return not face.is_digon


def q_bounds(g: RotationGraph) -> QBounds:
    vals = g.valences()
    low = [v for v, r in vals.items() if r < 2]
    if low:
        raise ValenceTooSmall(f"vertices of valence < 2: {low[:5]}",
                              vertices=[str(v) for v in low])
    q_min = max(vals.values())
    faces = g.faces
    if g.is_truncated or (g.is_periodic and any(
            not f.is_digon and (f.winding == 0 or f.entry is not None) for f in faces)):
        return QBounds(q_min, math.inf)
    return QBounds(q_min, sum(1 for f in faces if not f.is_digon))


def _check_regular(g: RotationGraph, q: int) -> None:
    bad = {v: r for v, r in g.valences().items() if r != q}
    if bad:
        raise NotRegular(f"{len(bad)} vertices do not have valence {q}",
                         valences={str(v): r for v, r in list(bad.items())[:10]})
    for e in g.ends:
        if e.q != q:
            raise EndConditionViolated(f"end at dart {e.attach} has widths summing to {e.q}, not {q}",
                                       condition="iii", attach=e.attach)


def _path(parent: Mapping, d: int) -> list:
    out = [d]
    while parent.get(out[-1]) is not None:
        out.append(parent[out[-1]])
    return out[::-1]


def propagate(g: RotationGraph, q: int, seed: Optional[int] = None) -> Labelling:
    """Forced propagation from ``seed`` (label 0) along rotations and twins."""
    _check_regular(g, q)
    if seed is None:
        seed = g.darts[0]
    if seed not in g._vertex_of:
        raise PropagationConflict(f"seed dart {seed} is not in the graph", seed=seed)
    labels = {seed: 0}
    parent = {seed: None}
    queue = deque([seed])
    while queue:
        d = queue.popleft()
        step = g.kind_of_dart(d).step
        prev = g.sigma_inv(d)
        nxt = [(g.sigma(d), (labels[d] + step * g.width(d)) % q),
               (prev, (labels[d] - step * g.width(prev)) % q)]
        t = g.alpha(d)
        if t is not None:
            nxt.append((t, labels[d]))
        for e, lab in nxt:
            if e not in labels:
                labels[e] = lab
                parent[e] = d
                queue.append(e)
            elif labels[e] != lab:
                cycle = _path(parent, e) + _path(parent, d)[::-1]
                raise PropagationConflict(
                    f"dart {e} is forced to carry both {labels[e]} and {lab}",
                    dart=e, labels=[labels[e], lab], cycle=cycle)
    return Labelling(q, labels)


def face_label_map(g: RotationGraph, L: Labelling) -> dict:
    """face index -> label j (the face's corners read {j-1, j})."""
    out = {}
    for f in g.faces:
        seen = {_corner_label(g, L, d) for d in f.darts}
        if len(seen) != 1:
            raise InconsistentFaceBoundary(f"face {f.index} has corner labels {sorted(seen)}",
                                           face=f.index, labels=sorted(seen))
        out[f.index] = seen.pop()
    return out


def _corner_label(g: RotationGraph, L: Labelling, d: int) -> int:
    bump = 0 if g.kind_of_dart(d) is Kind.CIRCLE else 1
    return (L.labels[g.sigma(d)] + bump) % L.q


def bundle_labels(g: RotationGraph, L: Labelling, d: int) -> list:
    """Labels carried by the (possibly wide) dart ``d`` in counterclockwise order."""
    step = g.kind_of_dart(d).step
    return [(L.labels[d] + step * k) % L.q for k in range(g.width(d))]


def end_labels(g: RotationGraph, L: Labelling, end: EndDescriptor) -> dict:
    """Flanking face labels and internal digon labels of one end."""
    fmap = face_label_map(g, L)
    fo = g.face_of
    before = fmap[fo[end.attach]]                # face leaving along the attach dart
    after = fmap[fo[g.sigma_inv(end.attach)]]    # face entering next to it
    flanks = sorted({before, after})
    digons = sorted(set(range(L.q)) - set(flanks))
    return {"flanks": [after, before], "digon_labels": digons}


def verify_labelling(g: RotationGraph, L: Labelling) -> LabelVerdict:
    verdict = LabelVerdict()
    q = L.q
    missing = [d for d in g.darts if d not in L.labels]
    if missing:
        verdict.vertex_violations.append({"rule": "defined", "darts": missing[:10]})
        return verdict
    for v, rot in g.rotations.items():
        expanded = [lab for d in rot for lab in bundle_labels(g, L, d)]
        if len(set(expanded)) != len(expanded) or len(expanded) > q:
            verdict.vertex_violations.append({"rule": "repeat", "vertex": str(v),
                                              "labels": expanded})
            continue
        step = g.kinds[v].step
        for d in rot:
            if L.labels[g.sigma(d)] != (L.labels[d] + step * g.width(d)) % q:
                verdict.vertex_violations.append({"rule": "order", "vertex": str(v),
                                                  "dart": d, "labels": expanded})
                break
    for d in g.darts:
        t = g.alpha(d)
        if t is not None and L.labels[t] != L.labels[d]:
            verdict.vertex_violations.append({"rule": "twin", "darts": [d, t]})
    for e in g.ends:
        if e.q != q:
            verdict.vertex_violations.append({"rule": "end-width", "attach": e.attach})
    if verdict.vertex_violations:
        return verdict
    try:
        fmap = face_label_map(g, L)
    except InconsistentFaceBoundary as exc:
        verdict.face_violations.append(exc.details)
        return verdict
    owned = {fmap[f.index] for f in g.faces if not f.is_digon}
    verdict.failing_labels = [j for j in range(q) if j not in owned]
    return verdict


def _edit_bundle(labels: list, drop: Optional[int] = None, after: Optional[int] = None,
                 new: Optional[int] = None, step: int = 1) -> list:
    """Remove ``drop`` or insert ``new`` right after ``after`` in counterclockwise order.
    At a cross vertex the new label precedes its predecessor label instead."""
    if drop is not None:
        return [x for x in labels if x != drop]
    out = []
    for x in labels:
        if x == after and step < 0:
            out.append(new)
        out.append(x)
        if x == after and step > 0:
            out.append(new)
    return out


def forget_digon_label(g: RotationGraph, L: Labelling, j: int):
    """Delete every edge labelled ``j`` (all j-faces must be digons) and close the gap."""
    q = L.q
    j %= q
    fmap = face_label_map(g, L)
    bad = [f.index for f in g.faces if fmap[f.index] == j and not f.is_digon]
    if bad:
        raise LabelHasNonDigonFace(f"label {j} owns non-digon faces {bad[:5]}", label=j,
                                   faces=bad)

    def relabel(x):
        return x - 1 if x > j else x

    drop = {d for d in g.darts if not g.is_loose(d) and L.labels[d] == j}
    drop |= {d for d in g.stubs if L.labels[d] == j}
    rotations, new_labels, ends = {}, {}, []
    for v, rot in g.rotations.items():
        rotations[v] = [d for d in rot if d not in drop]
    for d in g.darts:
        if d not in drop:
            new_labels[d] = relabel(L.labels[d])
    for e in g.ends:
        labs = bundle_labels(g, L, e.attach)
        if j in labs:
            kept = _edit_bundle(labs, drop=j)
            new_labels[e.attach] = relabel(kept[0])
            ends.append(EndDescriptor(e.attach, len(kept), e.rho2, e.first_kind))
        else:
            ends.append(EndDescriptor(e.attach, e.rho1, e.rho2 - 1, e.first_kind))
    twins = {a: b for a, b in g.twins.items() if a not in drop}
    links = [(a, b) for a, b in g.links if a not in drop]
    stubs = [d for d in g.stubs if d not in drop]
    h = RotationGraph(g.kinds, rotations, twins, ends, stubs, links, g.meta)
    return h, Labelling(q - 1, new_labels, L.name)


def insert_digon_label(g: RotationGraph, L: Labelling, j: int):
    """Inverse of forgetting: open a new label ``j`` as a digon next to every (j-1)-edge."""
    q = L.q + 1
    j %= q

    def relabel(x):
        return x + 1 if x >= j else x

    prev = relabel((j - 1) % L.q) if j > 0 else relabel(L.q - 1)
    rotations = {v: list(r) for v, r in g.rotations.items()}
    new_labels = {d: relabel(l) for d, l in L.labels.items()}
    twins, links, stubs = dict(g.twins), list(g.links), list(g.stubs)
    fresh = g.next_dart_id()

    def add_next_to(d):
        nonlocal fresh
        v = g.vertex_of(d)
        rot = rotations[v]
        i = rot.index(d)
        nd = fresh
        fresh += 1
        rot.insert(i + 1 if g.kinds[v] is Kind.CIRCLE else i, nd)
        new_labels[nd] = j
        return nd

    for a, b in g.edges():
        if new_labels[a] == prev:
            na, nb = add_next_to(a), add_next_to(b)
            twins[na], twins[nb] = nb, na
    for a, b in g.links:
        if new_labels[a] == prev:
            na, nb = add_next_to(a), add_next_to(b)
            links.append((na, nb))
    for s in g.stubs:
        if new_labels[s] == prev:
            stubs.append(add_next_to(s))
    ends = []
    for e in g.ends:
        labs = [relabel(x) for x in bundle_labels(g, L, e.attach)]
        if prev in labs:
            step = g.kind_of_dart(e.attach).step
            grown = _edit_bundle(labs, after=prev, new=j, step=step)
            new_labels[e.attach] = grown[0]
            ends.append(EndDescriptor(e.attach, len(grown), e.rho2, e.first_kind))
        else:
            ends.append(EndDescriptor(e.attach, e.rho1, e.rho2 + 1, e.first_kind))
    h = RotationGraph(g.kinds, rotations, twins, ends, stubs, links, g.meta)
    return h, Labelling(q, new_labels, L.name)


def minimality_descent(g: RotationGraph, L: Labelling):
    """Forget the smallest failing label until minimality holds (never below q=2).

    Returns ``(graph, labelling, forgotten)`` where ``forgotten`` lists the
    labels removed, each in the numbering current at the time of removal.
    """
    forgotten = []
    while True:
        verdict = verify_labelling(g, L)
        if not verdict.consistent or not verdict.failing_labels or L.q <= 2:
            return g, L, forgotten
        j = verdict.failing_labels[0]
        g, L = forget_digon_label(g, L, j)
        forgotten.append(j)


def construct_labelling(g: RotationGraph, q: int, seed: Optional[int] = None) -> LabellingReport:
    L = propagate(g, q, seed)
    verdict = verify_labelling(g, L)
    report = LabellingReport(L, verdict)
    if verdict.consistent and verdict.failing_labels:
        h, L0, forgotten = minimality_descent(g, L)
        report.reduced_q = L0.q
        report.forgotten = forgotten
        report.reduced_graph = h
        report.reduced_labelling = L0
    return report
