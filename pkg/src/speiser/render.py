"""DOT and SVG drawings of Speiser graphs: nucleus in red, ends as black rays."""

from __future__ import annotations

import math
from typing import Optional

from .errors import UnsupportedPeriodic
from .graph import Kind, RotationGraph, _j
from .labelling import Labelling

NUCLEUS_COLOR = "red"
END_COLOR = "black"
LINK_COLOR = "gray40"
FORMATS = ("dot", "svg")


def nucleus_vertices(g: RotationGraph) -> set:
    """Vertices of ``g`` that survive end maximization and removal."""
    from .decomposition import find_log_ends, nucleus

    if g.is_periodic:
        return set(g.vertices)
    h, ends = find_log_ends(g)
    return set(nucleus(h, ends).vertices) & set(g.vertices)


def _edges_by_pair(g: RotationGraph) -> list:
    """``(u, w, darts)`` per unordered vertex pair, darts taken from the circle side."""
    groups = {}
    for a, b in g.edges():
        if g.kind_of_dart(a) is not Kind.CIRCLE:
            a, b = b, a
        key = (g.vertex_of(a), g.vertex_of(b))
        groups.setdefault(key, []).append(a)
    return [(u, w, sorted(ds)) for (u, w), ds in groups.items()]


def _label_text(L: Optional[Labelling], d: int) -> str:
    if L is None or d not in L.labels:
        return ""
    return str(L[d])


# -- DOT -------------------------------------------------------------------------

def _q(s) -> str:
    return '"' + str(s).replace('"', r'\"') + '"'


def to_dot(g: RotationGraph, L: Optional[Labelling] = None, motif: bool = True) -> str:
    if g.is_periodic and not motif:
        raise UnsupportedPeriodic("periodic graphs are drawn one motif at a time")
    core = nucleus_vertices(g)
    name = g.meta.get("name", "speiser")
    lines = [f"graph {_q(name)} {{", "  node [fontname=Helvetica];"]
    for v in g.vertices:
        k = g.kind(v)
        shape = "circle" if k is Kind.CIRCLE else "box"
        color = NUCLEUS_COLOR if v in core else END_COLOR
        lines.append(f"  {_q(_j(v))} [kind={k.value}, shape={shape}, label={_q(k.symbol)}, "
                     f"xlabel={_q(_j(v))}, color={color}];")
    for a, b in g.edges():
        u, w = g.vertex_of(a), g.vertex_of(b)
        color = NUCLEUS_COLOR if u in core and w in core else END_COLOR
        lab = _label_text(L, a)
        extra = f", label={_q(lab)}" if lab else ""
        lines.append(f"  {_q(_j(u))} -- {_q(_j(w))} [class=edge, dart={a}, color={color}{extra}];")
    for i, e in enumerate(g.ends):
        v = g.vertex_of(e.attach)
        tip = f"end{i}"
        lines.append(f"  {tip} [shape=point, class=decoration, xlabel={_q(f'({e.rho1},{e.rho2})')}];")
        lines.append(f"  {_q(_j(v))} -- {tip} [class=end, dart={e.attach}, color={END_COLOR}, "
                     "style=bold, penwidth=2];")
    for i, d in enumerate(sorted(g.stubs)):
        tip = f"stub{i}"
        lines.append(f"  {tip} [shape=point, class=decoration, width=0.03];")
        lines.append(f"  {_q(_j(g.vertex_of(d)))} -- {tip} [class=stub, dart={d}, style=dotted];")
    for a, b in g.links:
        lines.append(f"  {_q(_j(g.vertex_of(a)))} -- {_q(_j(g.vertex_of(b)))} "
                     f"[class=link, dart={a}, style=dashed, color={LINK_COLOR}, label=\"repeat\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- SVG -------------------------------------------------------------------------

def layout(g: RotationGraph) -> dict:
    """Deterministic positions: nucleus on a circle (or at the origin), the
    remaining vertices on an outer ring, both in vertex order."""
    core = [v for v in g.vertices if v in nucleus_vertices(g)]
    rest = [v for v in g.vertices if v not in set(core)]
    pos = {}

    def ring(vs, radius, phase):
        n = len(vs)
        for i, v in enumerate(vs):
            if n == 1 and radius == 0:
                pos[v] = (0.0, 0.0)
                continue
            t = phase + 2 * math.pi * i / n
            pos[v] = (radius * math.cos(t), radius * math.sin(t))

    r_core = 0 if len(core) <= 1 else 40 + 12 * len(core)
    ring(core, r_core, -math.pi / 2)
    if rest:
        r_rest = (r_core or 0) + 70 if core else (0 if len(rest) == 1 else 40 + 12 * len(rest))
        ring(rest, r_rest, -math.pi / 2 + math.pi / max(len(rest), 1))
    return pos


def _ray_angles(g: RotationGraph, pos: dict) -> dict:
    """Outward direction per end attachment dart, spread when ends share a vertex."""
    by_vertex = {}
    for e in g.ends:
        by_vertex.setdefault(g.vertex_of(e.attach), []).append(e.attach)
    out = {}
    for v, darts in by_vertex.items():
        x, y = pos[v]
        n = len(darts)
        if abs(x) < 1e-9 and abs(y) < 1e-9:
            for i, d in enumerate(darts):
                out[d] = -math.pi / 2 + 2 * math.pi * i / n
        else:
            base = math.atan2(y, x)
            for i, d in enumerate(darts):
                out[d] = base + 0.5 * (i - (n - 1) / 2)
    return out


def _f(x: float) -> str:
    return f"{x:.2f}"


def to_svg(g: RotationGraph, L: Optional[Labelling] = None, motif: bool = True) -> str:
    if g.is_periodic and not motif:
        raise UnsupportedPeriodic("periodic graphs are drawn one motif at a time")
    core = nucleus_vertices(g)
    pos = layout(g)
    shapes, texts = [], []
    xs, ys = [0.0], [0.0]

    def mark(x, y):
        xs.append(x)
        ys.append(y)

    for u, w, darts in _edges_by_pair(g):
        (x1, y1), (x2, y2) = pos[u], pos[w]
        color = NUCLEUS_COLOR if u in core and w in core else END_COLOR
        dx, dy = x2 - x1, y2 - y1
        length = math.hypot(dx, dy) or 1.0
        nx_, ny_ = -dy / length, dx / length
        m = len(darts)
        for i, d in enumerate(darts):
            off = 10 * (i - (m - 1) / 2)
            if u == w or length < 1e-9:
                continue
            cx, cy = (x1 + x2) / 2 + 2 * off * nx_, (y1 + y2) / 2 + 2 * off * ny_
            shapes.append(f'<path d="M {_f(x1)} {_f(y1)} Q {_f(cx)} {_f(cy)} {_f(x2)} {_f(y2)}" '
                          f'stroke="{color}" fill="none" stroke-width="1.5"/>')
            lab = _label_text(L, d)
            if lab:
                tx, ty = (x1 + x2) / 2 + off * nx_, (y1 + y2) / 2 + off * ny_
                texts.append(f'<text x="{_f(tx)}" y="{_f(ty)}" font-size="8" fill="blue">{lab}</text>')
    angles = _ray_angles(g, pos)
    for e in g.ends:
        v = g.vertex_of(e.attach)
        x, y = pos[v]
        t = angles[e.attach]
        ux, uy = math.cos(t), math.sin(t)
        kind = e.first_kind
        px, py = x, y
        for step in range(1, 4):
            width = e.rho1 if step % 2 else e.rho2
            qx, qy = x + 28 * step * ux, y + 28 * step * uy
            shapes.append(f'<line x1="{_f(px)}" y1="{_f(py)}" x2="{_f(qx)}" y2="{_f(qy)}" '
                          f'stroke="{END_COLOR}" stroke-width="{1.2 * width}"/>')
            shapes.append(_glyph(qx, qy, kind, END_COLOR, small=True))
            kind = kind.other
            px, py = qx, qy
        fx, fy = x + 110 * ux, y + 110 * uy
        shapes.append(f'<line x1="{_f(px)}" y1="{_f(py)}" x2="{_f(fx)}" y2="{_f(fy)}" '
                      f'stroke="{END_COLOR}" stroke-dasharray="3,3"/>')
        texts.append(f'<text x="{_f(fx + 4 * ux)}" y="{_f(fy + 4 * uy)}" font-size="9">'
                     f'({e.rho1},{e.rho2})</text>')
        mark(fx + 30 * ux, fy + 12 * uy)
    for d in sorted(g.stubs):
        x, y = pos[g.vertex_of(d)]
        t = math.atan2(y, x) if (x or y) else 0.0
        sx, sy = x + 14 * math.cos(t + 0.3), y + 14 * math.sin(t + 0.3)
        shapes.append(f'<line x1="{_f(x)}" y1="{_f(y)}" x2="{_f(sx)}" y2="{_f(sy)}" '
                      'stroke="gray" stroke-dasharray="1,2"/>')
        mark(sx, sy)
    for a, b in g.links:
        (x1, y1), (x2, y2) = pos[g.vertex_of(a)], pos[g.vertex_of(b)]
        shapes.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                      'stroke="gray" stroke-dasharray="6,3"/>')
        texts.append(f'<text x="{_f((x1 + x2) / 2)}" y="{_f((y1 + y2) / 2 - 4)}" '
                     'font-size="8" fill="gray">repeat</text>')
    for v in g.vertices:
        x, y = pos[v]
        mark(x, y)
        color = NUCLEUS_COLOR if v in core else END_COLOR
        shapes.append(_glyph(x, y, g.kind(v), color))
        texts.append(f'<text x="{_f(x + 8)}" y="{_f(y - 8)}" font-size="9">{_j(v)}</text>')
    pad = 30
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad
    title = g.meta.get("name", "speiser")
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(x0)} {_f(y0)} {_f(w)} {_f(h)}" '
        f'width="{_f(w)}" height="{_f(h)}">',
        f"<title>{title}</title>",
        *shapes, *texts, "</svg>"]) + "\n"


def _glyph(x: float, y: float, kind: Kind, color: str, small: bool = False) -> str:
    r = 3.5 if small else 6
    if kind is Kind.CIRCLE:
        return (f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{r}" fill="white" stroke="{color}" '
                'stroke-width="1.5"/>')
    return (f'<path d="M {_f(x - r)} {_f(y - r)} L {_f(x + r)} {_f(y + r)} '
            f'M {_f(x - r)} {_f(y + r)} L {_f(x + r)} {_f(y - r)}" stroke="{color}" '
            'stroke-width="2"/>')


def render(g: RotationGraph, L: Optional[Labelling] = None, fmt: str = "svg",
           motif: bool = True) -> str:
    if fmt == "dot":
        return to_dot(g, L, motif)
    if fmt == "svg":
        return to_svg(g, L, motif)
    raise ValueError(f"unknown figure format {fmt!r}; choose from {FORMATS}")
