"""SVG output for finished layouts."""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .exceptions import BadOptions

PALETTE = (
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628",
    "#f781bf", "#17becf", "#66a61e", "#e7298a", "#1b9e77", "#7570b3",
)

MARGIN_LEFT = 80.0
MARGIN_TOP = 30.0
MARGIN_BOTTOM = 40.0
MARGIN_RIGHT = 30.0
HULL_HALF_WIDTH = 0.18  # fraction of column width


@dataclass(frozen=True)
class RenderOptions:
    column_width: float = 60.0
    row_unit: float = 12.0
    curve: str = "straight"
    show_group_hulls: bool = False
    label_actors: bool = True

    def check(self):
        if not (self.column_width > 0 and self.row_unit > 0):
            raise BadOptions("column_width and row_unit must be positive")
        if self.curve not in ("straight", "smooth"):
            raise BadOptions(f"curve must be 'straight' or 'smooth', not {self.curve!r}")
        return self


def _fmt(v):
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


class _Frame:
    def __init__(self, layout, options):
        self.layout = layout
        self.opt = options
        self.ymin = min(layout.y.values(), default=0.0)
        self.ymax = max(layout.y.values(), default=0.0)

    def px(self, h):
        return MARGIN_LEFT + h * self.opt.column_width

    def py(self, y):
        return MARGIN_TOP + (y - self.ymin) * self.opt.row_unit

    @property
    def width(self):
        return self.px(max(len(self.layout.x) - 1, 0)) + MARGIN_RIGHT

    @property
    def height(self):
        return self.py(self.ymax) + MARGIN_BOTTOM


def _segment(frame, p, c):
    x1, y1 = frame.px(p.time), frame.py(frame.layout.y[p])
    x2, y2 = frame.px(c.time), frame.py(frame.layout.y[c])
    if frame.opt.curve == "smooth":
        xm = (x1 + x2) / 2
        return (f"M{_fmt(x1)},{_fmt(y1)} C{_fmt(xm)},{_fmt(y1)} "
                f"{_fmt(xm)},{_fmt(y2)} {_fmt(x2)},{_fmt(y2)}")
    return f"M{_fmt(x1)},{_fmt(y1)} L{_fmt(x2)},{_fmt(y2)}"


def _hulls(frame, instance):
    out = []
    half = HULL_HALF_WIDTH * frame.opt.column_width
    pad = 0.4 * frame.opt.row_unit
    by_group = {}
    for v, y in frame.layout.y.items():
        if v.group is not None:
            by_group.setdefault(v.group, {}).setdefault(v.time, []).append(y)
    for g in instance.groups:
        cols = by_group.get(g.id)
        if not cols:
            continue
        top, bottom = [], []
        for h in range(g.begin, g.end + 1):
            if h not in cols:
                continue
            lo, hi = frame.py(min(cols[h])) - pad, frame.py(max(cols[h])) + pad
            x = frame.px(h)
            top += [(x - half, lo), (x + half, lo)]
            bottom += [(x - half, hi), (x + half, hi)]
        pts = top + bottom[::-1]
        d = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)
        out.append(f'<polygon class="hull" data-group={quoteattr(g.id)} points="{d}" '
                   f'fill="#888888" fill-opacity="0.18" stroke="none"/>')
    return out


def render_svg(layout, instance, options=None):
    """One ``<g class="actor">`` per actor: an edge path per tree edge plus node markers."""
    options = (options or RenderOptions()).check()
    frame = _Frame(layout, options)
    colors = {}
    for i, a in enumerate(instance.actors):
        colors[a.id] = a.color or PALETTE[i % len(PALETTE)]

    nodes_by_actor = {}
    for col in layout.schedule.columns:
        for v in col:
            nodes_by_actor.setdefault(v.actor, []).append(v)
    edges_by_actor = {}
    for p, c in layout.edges:
        edges_by_actor.setdefault(c.actor, []).append((p, c))

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(frame.width)}" height="{_fmt(frame.height)}" '
        f'viewBox="0 0 {_fmt(frame.width)} {_fmt(frame.height)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    axis_y = frame.height - MARGIN_BOTTOM / 2
    lines.append('<g class="axis" font-family="sans-serif" font-size="10" text-anchor="middle">')
    for h, label in enumerate(instance.time_axis.labels):
        lines.append(f'<text x="{_fmt(frame.px(h))}" y="{_fmt(axis_y)}">{escape(label)}</text>')
    lines.append("</g>")
    if options.show_group_hulls:
        lines.append('<g class="hulls">')
        lines += _hulls(frame, instance)
        lines.append("</g>")

    for a in instance.actors:
        nodes = nodes_by_actor.get(a.id)
        if not nodes:
            continue
        color = colors[a.id]
        lines.append(f'<g class="actor" data-actor={quoteattr(a.id)} stroke={quoteattr(color)} '
                     f'fill="none" stroke-width="2" stroke-linecap="round">')
        for p, c in edges_by_actor.get(a.id, ()):
            lines.append(f'<path class="edge" d="{_segment(frame, p, c)}"/>')
        for v in nodes:
            group = "" if v.group is None else v.group
            lines.append(f'<circle class="node" cx="{_fmt(frame.px(v.time))}" '
                         f'cy="{_fmt(frame.py(layout.y[v]))}" r="1.5" fill={quoteattr(color)} '
                         f'data-time="{v.time}" data-group={quoteattr(group)}/>')
        if options.label_actors:
            v = nodes[0]
            lines.append(f'<text x="{_fmt(frame.px(v.time) - 6)}" y="{_fmt(frame.py(layout.y[v]) + 3)}" '
                         f'text-anchor="end" font-family="sans-serif" font-size="10" '
                         f'stroke="none" fill={quoteattr(color)}>{escape(a.display_name)}</text>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
