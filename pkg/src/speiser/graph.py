"""Dart-based combinatorial maps and bipartite rotation graphs.

A vertex owns a cyclic rotation of outgoing darts listed counterclockwise.
Two darts form an edge when they are twins.  The face walk used throughout is

    phi(d) = sigma^-1(alpha(d))

which keeps the face on the left of each traversed dart.  For a dart ``e`` on
a face, the corner of that face at ``vertex(e)`` lies between ``e`` and
``sigma(e)``.

Besides ordinary twinned darts a rotation graph may carry

* end darts: unpaired darts standing for a whole logarithmic end, described
  by an :class:`EndDescriptor` (the dart counts as ``rho1`` parallel edges);
* stubs: unpaired darts marking where a drawing of an infinite graph was cut;
* periodic links ``(out, into)``: dart ``out`` of copy ``k`` is glued to dart
  ``into`` of copy ``k + 1``.  The stored map is the quotient by the shift.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Optional

from .errors import (
    BadRotation,
    BadTwinPairing,
    Disconnected,
    EndConditionViolated,
    NotBipartite,
    UnknownVertex,
)

Vid = Hashable


class Kind(str, Enum):
    CIRCLE = "circle"
    CROSS = "cross"

    @property
    def other(self) -> "Kind":
        return Kind.CROSS if self is Kind.CIRCLE else Kind.CIRCLE

    @property
    def step(self) -> int:
        """Label increment between counterclockwise-consecutive darts."""
        return 1 if self is Kind.CIRCLE else -1

    @property
    def symbol(self) -> str:
        return "o" if self is Kind.CIRCLE else "x"


@dataclass(frozen=True)
class EndDescriptor:
    """A semi-infinite ladder of alternating bundles hanging off ``attach``.

    ``rho1`` is the width of the bundle between the attachment vertex and the
    first end vertex; widths then alternate ``rho2, rho1, rho2, ...``.
    """

    attach: int
    rho1: int
    rho2: int
    first_kind: Kind

    @property
    def q(self) -> int:
        return self.rho1 + self.rho2

    def as_dict(self) -> dict:
        return {"attach": self.attach, "rho1": self.rho1, "rho2": self.rho2,
                "first_kind": self.first_kind.value}


@dataclass(frozen=True)
class Face:
    """One face of a map.

    Bounded faces are closed walks.  Unbounded faces come in two shapes: a
    segment entering from infinity next to the unpaired dart ``entry`` and
    leaving along the unpaired dart ``exit`` (the last dart of ``darts``), or
    a closed walk on a periodic quotient whose lift never closes
    (``winding != 0``).
    """

    index: int
    darts: tuple
    bounded: bool
    entry: Optional[int] = None
    exit: Optional[int] = None
    winding: int = 0

    @property
    def sides(self) -> Optional[int]:
        return len(self.darts) if self.bounded else None

    @property
    def is_digon(self) -> bool:
        return self.bounded and len(self.darts) == 2


class CombinatorialMap:
    """Rotations plus a partial twin involution.  Immutable by convention."""

    def __init__(self, rotations: Mapping[Vid, Iterable[int]], twins: Mapping[int, int]):
        self.rotations: dict = {v: tuple(r) for v, r in rotations.items()}
        self.twins: dict = dict(twins)
        self._index()

    def _index(self) -> None:
        vertex_of, pos = {}, {}
        for v, rot in self.rotations.items():
            if len(rot) == 0:
                raise BadRotation(f"vertex {v!r} has an empty rotation", vertex=_j(v))
            for i, d in enumerate(rot):
                if not isinstance(d, int) or isinstance(d, bool) or d < 0:
                    raise BadRotation(f"dart id {d!r} is not a nonnegative integer", dart=_j(d))
                if d in vertex_of:
                    raise BadRotation(f"dart {d} appears in more than one rotation slot",
                                      dart=d, vertex=_j(v))
                vertex_of[d] = v
                pos[d] = i
        for a, b in self.twins.items():
            if a not in vertex_of or b not in vertex_of:
                raise BadTwinPairing(f"twin pair ({a}, {b}) names an unknown dart", pair=[a, b])
            if a == b:
                raise BadTwinPairing(f"dart {a} is its own twin", pair=[a, b])
            if self.twins.get(b) != a:
                raise BadTwinPairing(f"twin of {a} is {b} but twin of {b} is {self.twins.get(b)}",
                                     pair=[a, b])
        self._vertex_of = vertex_of
        self._pos = pos

    # -- basic navigation ---------------------------------------------------
    @property
    def vertices(self) -> tuple:
        return tuple(self.rotations)

    @cached_property
    def darts(self) -> tuple:
        return tuple(sorted(self._vertex_of))

    def has_vertex(self, v) -> bool:
        return v in self.rotations

    def vertex_of(self, d: int):
        return self._vertex_of[d]

    def sigma(self, d: int) -> int:
        rot = self.rotations[self._vertex_of[d]]
        return rot[(self._pos[d] + 1) % len(rot)]

    def sigma_inv(self, d: int) -> int:
        rot = self.rotations[self._vertex_of[d]]
        return rot[(self._pos[d] - 1) % len(rot)]

    def alpha(self, d: int) -> Optional[int]:
        return self.twins.get(d)

    def shift(self, d: int) -> int:
        return 0

    def is_loose(self, d: int) -> bool:
        return self.alpha(d) is None

    def phi(self, d: int) -> Optional[int]:
        t = self.alpha(d)
        return None if t is None else self.sigma_inv(t)

    def degree(self, v) -> int:
        if v not in self.rotations:
            raise UnknownVertex(f"unknown vertex {v!r}", vertex=_j(v))
        return len(self.rotations[v])

    @cached_property
    def loose_darts(self) -> tuple:
        return tuple(d for d in self.darts if self.is_loose(d))

    def edges(self) -> list:
        """Ordinary edges as ``(d, twin(d))`` with ``d < twin(d)``."""
        return [(a, b) for a, b in sorted(self.twins.items()) if a < b]

    @property
    def num_vertices(self) -> int:
        return len(self.rotations)

    @property
    def num_edges(self) -> int:
        return len(self.twins) // 2

    # -- faces --------------------------------------------------------------
    @cached_property
    def faces(self) -> tuple:
        faces, seen = [], set()
        for loose in self.loose_darts:
            walk, winding, cur = [], 0, self.sigma_inv(loose)
            while True:
                walk.append(cur)
                seen.add(cur)
                if self.is_loose(cur):
                    break
                winding += self.shift(cur)
                cur = self.phi(cur)
            faces.append(Face(len(faces), tuple(walk), False, entry=loose, exit=walk[-1],
                              winding=winding))
        for d in self.darts:
            if d in seen:
                continue
            walk, winding, cur = [], 0, d
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                winding += self.shift(cur)
                cur = self.phi(cur)
            if cur != d:  # pragma: no cover - phi is injective on paired darts
                raise BadRotation("face walk did not close", dart=d)
            faces.append(Face(len(faces), tuple(walk), winding == 0, winding=winding))
        return tuple(faces)

    @cached_property
    def face_of(self) -> dict:
        """dart -> index of the face whose walk contains it."""
        out = {}
        for f in self.faces:
            for d in f.darts:
                out[d] = f.index
        return out

    def bounded_faces(self) -> list:
        return [f for f in self.faces if f.bounded]

    def is_connected(self) -> bool:
        if not self.rotations:
            return False
        start = next(iter(self.rotations))
        seen, todo = {start}, [start]
        while todo:
            v = todo.pop()
            for d in self.rotations[v]:
                t = self.alpha(d)
                if t is not None:
                    w = self._vertex_of[t]
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
        return len(seen) == len(self.rotations)

    # -- structural identity -----------------------------------------------
    def dart_signature(self, d: int):
        return ("loose" if self.is_loose(d) else "edge", self.shift(d))

    def _code_from(self, start: int, data: Optional[Mapping] = None):
        index = {start: 0}
        order = [start]
        queue = deque([start])
        while queue:
            d = queue.popleft()
            for nxt in (self.sigma(d), self.alpha(d)):
                if nxt is not None and nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                    queue.append(nxt)
        code = []
        for d in order:
            t = self.alpha(d)
            code.append((self.dart_signature(d), index[self.sigma(d)],
                         -1 if t is None else index[t],
                         None if data is None else data.get(d)))
        return len(order), tuple(code)

    def canonical_code(self, data: Optional[Mapping] = None):
        """Lexicographically least traversal code over all start darts."""
        best = None
        for d in self.darts:
            code = self._code_from(d, data)
            if best is None or _code_key(code) < _code_key(best):
                best = code
        return best

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(V={self.num_vertices}, E={self.num_edges}, "
                f"loose={len(self.loose_darts)})")


def _code_key(code):
    return repr(code)


def is_isomorphic(g: CombinatorialMap, h: CombinatorialMap,
                  data_g: Optional[Mapping] = None, data_h: Optional[Mapping] = None) -> bool:
    """Orientation-preserving isomorphism test.

    The map is determined by the image of one dart, so we fix a start dart
    of ``g`` and try every dart of ``h``.  Optional per-dart data (labels,
    face colours) must be carried along unchanged.
    """
    if len(g.darts) != len(h.darts) or g.num_vertices != h.num_vertices:
        return False
    if not g.darts:
        return True
    target = g._code_from(g.darts[0], data_g)
    if target[0] != len(g.darts):
        raise Disconnected("isomorphism test needs a connected map")
    return any(h._code_from(d, data_h) == target for d in h.darts)


def _j(v):
    """JSON-friendly rendering of a vertex id."""
    return v if isinstance(v, (int, str)) else repr(v)


class RotationGraph(CombinatorialMap):
    """Bipartite rotation graph with optional ends, stubs and periodic links."""

    def __init__(self, kinds: Mapping[Vid, Kind], rotations: Mapping[Vid, Iterable[int]],
                 twins: Mapping[int, int], ends: Iterable[EndDescriptor] = (),
                 stubs: Iterable[int] = (), links: Iterable[tuple] = (),
                 meta: Optional[Mapping] = None):
        self.kinds = {v: Kind(k) for v, k in kinds.items()}
        self.ends = tuple(sorted(ends, key=lambda e: e.attach))
        self.stubs = frozenset(stubs)
        self.links = tuple(sorted((int(a), int(b)) for a, b in links))
        self.meta = dict(meta or {})
        link_map = {}
        for a, b in self.links:
            if a in link_map or b in link_map or a == b:
                raise BadTwinPairing(f"periodic link ({a}, {b}) reuses a dart", pair=[a, b])
            link_map[a], link_map[b] = b, a
        self._link = link_map
        self._link_shift = {a: 1 for a, _ in self.links} | {b: -1 for _, b in self.links}
        self._end_at = {e.attach: e for e in self.ends}
        super().__init__(rotations, twins)
        self._validate()

    # -- validation ----------------------------------------------------------
    def _validate(self) -> None:
        if not self.rotations:
            raise Disconnected("graph has no vertices")
        if set(self.kinds) != set(self.rotations):
            missing = set(self.rotations) ^ set(self.kinds)
            raise UnknownVertex("kinds and rotations disagree on the vertex set",
                                vertices=sorted(map(str, missing)))
        for a in self._link:
            if a not in self._vertex_of:
                raise BadTwinPairing(f"periodic link names unknown dart {a}", dart=a)
            if a in self.twins:
                raise BadTwinPairing(f"dart {a} is both twinned and periodically linked", dart=a)
        if len(self._end_at) != len(self.ends):
            raise EndConditionViolated("two ends share an attachment dart", condition="iv")
        for d in list(self._end_at) + sorted(self.stubs):
            if d not in self._vertex_of:
                raise BadTwinPairing(f"unpaired dart {d} is not in any rotation", dart=d)
            if d in self.twins or d in self._link:
                raise BadTwinPairing(f"dart {d} is declared unpaired but has a partner", dart=d)
        if set(self._end_at) & self.stubs:
            raise BadTwinPairing("a dart is declared both end and stub")
        for d in self._vertex_of:
            if d not in self.twins and d not in self._link and d not in self._end_at \
                    and d not in self.stubs:
                raise BadTwinPairing(f"dart {d} has no twin", dart=d)
        for d, t in list(self.twins.items()) + list(self._link.items()):
            u, w = self._vertex_of[d], self._vertex_of[t]
            if self.kinds[u] == self.kinds[w]:
                what = "loop" if u == w else "edge"
                raise NotBipartite(f"{what} {_j(u)}-{_j(w)} joins two {self.kinds[u].value} vertices",
                                   darts=[d, t])
        for e in self.ends:
            if e.rho1 < 1 or e.rho2 < 1:
                raise EndConditionViolated("bundle widths must be positive", condition="iii",
                                           attach=e.attach)
            v = self._vertex_of[e.attach]
            if self.kinds[v] == e.first_kind:
                raise NotBipartite(f"end at dart {e.attach} starts with the attachment kind",
                                   darts=[e.attach])
        if not self.is_connected():
            raise Disconnected("graph is not connected")
        chi = self.euler_characteristic()
        if chi is not None and chi != 2:
            raise BadRotation(f"rotation system is not planar (V - E + F = {chi})", euler=chi)

    # -- navigation with links -----------------------------------------------
    def alpha(self, d: int) -> Optional[int]:
        t = self.twins.get(d)
        return self._link.get(d) if t is None else t

    def shift(self, d: int) -> int:
        return self._link_shift.get(d, 0)

    def kind(self, v) -> Kind:
        if v not in self.kinds:
            raise UnknownVertex(f"unknown vertex {v!r}", vertex=_j(v))
        return self.kinds[v]

    def kind_of_dart(self, d: int) -> Kind:
        return self.kinds[self._vertex_of[d]]

    def end_at(self, d: int) -> Optional[EndDescriptor]:
        return self._end_at.get(d)

    def width(self, d: int) -> int:
        e = self._end_at.get(d)
        return 1 if e is None else e.rho1

    def valence(self, v) -> int:
        if v not in self.rotations:
            raise UnknownVertex(f"unknown vertex {v!r}", vertex=_j(v))
        return sum(self.width(d) for d in self.rotations[v])

    def valences(self) -> dict:
        return {v: self.valence(v) for v in self.rotations}

    def vertices_of_kind(self, kind: Kind) -> list:
        return [v for v in self.rotations if self.kinds[v] is kind]

    @property
    def is_finite(self) -> bool:
        return not self.ends and not self.stubs and not self.links

    @property
    def is_periodic(self) -> bool:
        return bool(self.links)

    @property
    def is_truncated(self) -> bool:
        return bool(self.stubs)

    def edges(self) -> list:
        """Ordinary edges; periodic links are listed by ``links``."""
        return super().edges()

    def all_edges(self) -> list:
        return self.edges() + list(self.links)

    def neighbours(self, v) -> list:
        out = []
        for d in self.rotations[v]:
            t = self.alpha(d)
            if t is not None:
                out.append(self._vertex_of[t])
        return out

    def dart_signature(self, d: int):
        e = self._end_at.get(d)
        if e is not None:
            tag = ("end", e.rho1, e.rho2)
        elif d in self.stubs:
            tag = ("stub",)
        else:
            tag = ("edge",)
        return (self.kind_of_dart(d).value, tag, self.shift(d))

    # -- Euler ----------------------------------------------------------------
    def points_at_infinity(self) -> int:
        """Number of cycles of the cyclic order induced on unpaired darts at infinity."""
        perm = {f.exit: f.entry for f in self.faces if f.entry is not None}
        seen, cycles = set(), 0
        for d in perm:
            if d in seen:
                continue
            cycles += 1
            while d not in seen:
                seen.add(d)
                d = perm[d]
        return cycles

    def euler_characteristic(self) -> Optional[int]:
        """V - E + F on the sphere; for finite-type graphs the unpaired darts are
        closed up through the points at infinity.  ``None`` for periodic graphs."""
        if self.is_periodic:
            return None
        bounded = sum(1 for f in self.faces if f.bounded)
        if not self.loose_darts:
            return self.num_vertices - self.num_edges + bounded
        return self.num_vertices + self.points_at_infinity() - self.num_edges + bounded

    # -- construction helpers -------------------------------------------------
    def replace(self, **changes) -> "RotationGraph":
        args = dict(kinds=self.kinds, rotations=self.rotations, twins=self.twins,
                    ends=self.ends, stubs=self.stubs, links=self.links, meta=self.meta)
        args.update(changes)
        return RotationGraph(**args)

    def next_dart_id(self) -> int:
        return max(self.darts, default=-1) + 1

    def normalized(self) -> "RotationGraph":
        """Relabel darts densely in rotation order (vertex input order)."""
        ren = {}
        for v in self.rotations:
            for d in self.rotations[v]:
                ren[d] = len(ren)
        return self.relabel_darts(ren)

    def relabel_darts(self, ren: Mapping[int, int]) -> "RotationGraph":
        return RotationGraph(
            self.kinds,
            {v: [ren[d] for d in r] for v, r in self.rotations.items()},
            {ren[a]: ren[b] for a, b in self.twins.items()},
            [EndDescriptor(ren[e.attach], e.rho1, e.rho2, e.first_kind) for e in self.ends],
            [ren[d] for d in self.stubs],
            [(ren[a], ren[b]) for a, b in self.links],
            self.meta,
        )

    # -- serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "vertices": [{"id": _j(v), "kind": self.kinds[v].value, "rotation": list(r)}
                         for v, r in self.rotations.items()],
            "twins": [[a, b] for a, b in self.edges()],
            "ends": [e.as_dict() for e in self.ends],
        }
        if self.stubs:
            out["stubs"] = sorted(self.stubs)
        if self.links:
            out["periodic"] = {"links": [list(p) for p in self.links]}
        out["meta"] = dict(self.meta)
        return out


def build_graph(spec: Mapping) -> RotationGraph:
    """Validate a graph description (the JSON object form) into a RotationGraph."""
    from .errors import InputError

    if not isinstance(spec, Mapping) or "vertices" not in spec:
        raise InputError("graph description needs a 'vertices' list")
    kinds, rotations = {}, {}
    for entry in spec["vertices"]:
        try:
            vid, kind, rot = entry["id"], entry["kind"], entry["rotation"]
        except (KeyError, TypeError) as exc:
            raise BadRotation(f"vertex entry {entry!r} is missing {exc}") from None
        if isinstance(vid, list):
            vid = tuple(vid)
        if vid in kinds:
            raise BadRotation(f"vertex id {vid!r} is repeated", vertex=_j(vid))
        try:
            kinds[vid] = Kind(kind)
        except ValueError:
            raise NotBipartite(f"vertex {vid!r} has unknown kind {kind!r}") from None
        rotations[vid] = list(rot)
    twins = {}
    for pair in spec.get("twins", []):
        if len(pair) != 2:
            raise BadTwinPairing(f"twin entry {pair!r} is not a pair")
        a, b = pair
        if a in twins or b in twins:
            raise BadTwinPairing(f"dart in pair {pair!r} is already paired", pair=list(pair))
        if a == b:
            raise BadTwinPairing(f"dart {a} paired with itself", pair=list(pair))
        twins[a], twins[b] = b, a
    ends = []
    for e in spec.get("ends", []):
        try:
            ends.append(EndDescriptor(int(e["attach"]), int(e["rho1"]), int(e["rho2"]),
                                      Kind(e["first_kind"])))
        except (KeyError, ValueError, TypeError) as exc:
            raise EndConditionViolated(f"malformed end descriptor {e!r}: {exc}") from None
    periodic = spec.get("periodic") or {}
    links = [tuple(p) for p in periodic.get("links", [])]
    return RotationGraph(kinds, rotations, twins, ends, spec.get("stubs", []), links,
                         spec.get("meta", {}))


def faces(g: CombinatorialMap) -> tuple:
    return g.faces


def valence(g: RotationGraph, v) -> int:
    return g.valence(v)


class GraphBuilder:
    """Incremental construction; rotations follow insertion order unless reordered."""

    def __init__(self, **meta):
        self.kinds: dict = {}
        self.rot: dict = {}
        self.twins: dict = {}
        self.ends: list = []
        self.stubs: list = []
        self.links: list = []
        self.meta = meta
        self._next = 0

    def vertex(self, vid, kind) -> "GraphBuilder":
        self.kinds[vid] = Kind(kind)
        self.rot[vid] = []
        return self

    def _dart(self, v) -> int:
        d = self._next
        self._next += 1
        self.rot[v].append(d)
        return d

    def edge(self, u, v) -> tuple:
        a, b = self._dart(u), self._dart(v)
        self.twins[a], self.twins[b] = b, a
        return a, b

    def bundle(self, u, v, width: int) -> list:
        return [self.edge(u, v) for _ in range(width)]

    def end(self, v, rho1: int, rho2: int) -> int:
        d = self._dart(v)
        self.ends.append(EndDescriptor(d, rho1, rho2, self.kinds[v].other))
        return d

    def stub(self, v) -> int:
        d = self._dart(v)
        self.stubs.append(d)
        return d

    def link(self, u, v) -> tuple:
        """Edge from ``u`` in copy k to ``v`` in copy k+1."""
        a, b = self._dart(u), self._dart(v)
        self.links.append((a, b))
        return a, b

    def order(self, v, darts: Iterable[int]) -> "GraphBuilder":
        darts = list(darts)
        if sorted(darts) != sorted(self.rot[v]):
            raise BadRotation(f"reordering of {v!r} must permute its darts")
        self.rot[v] = darts
        return self

    def build(self) -> RotationGraph:
        return RotationGraph(self.kinds, self.rot, self.twins, self.ends, self.stubs,
                             self.links, self.meta)
