"""Quality metrics of a finished layout."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .crossmin import count_block_crossings_bound, count_line_crossings
from .exceptions import InconsistentInput

WIGGLE_EPS = 1e-9


@dataclass(frozen=True)
class MetricsReport:
    line_crossings: int = 0
    block_crossings: int = 0
    block_crossings_exact: bool = True
    wiggle_count: int = 0
    wiggle_magnitude: float = 0.0
    white_space: float = 0.0
    planarity_violations: int = 0
    continuity_violations: int = 0
    branch_degree_excess: int = 0

    def to_dict(self):
        return asdict(self)


def continuity_violations(trees):
    """Branches that end while their actor is still alive."""
    total = 0
    for t in trees:
        for h in range(t.first, t.last):
            total += sum(1 for c in t.child_counts(h).values() if c == 0)
    return total


def branch_degree_excess(trees):
    """Excess of the busiest branch over ceil(m'/m) at every transition."""
    total = 0
    for t in trees:
        for h in range(t.first, t.last):
            counts = t.child_counts(h)
            m, m2 = len(counts), len(t.levels[h + 1])
            total += max(0, max(counts.values()) - math.ceil(m2 / m))
    return total


def required_gap(a, b, params):
    if a.group is not None and a.group == b.group:
        return params.unit * params.group_gap
    return params.unit * params.block_gap


def white_space(layout, params=None):
    """Vertical slack beyond the tightest packing, summed over columns."""
    params = params or layout.params
    total = 0.0
    for col in layout.schedule.columns:
        if len(col) < 2:
            continue
        extent = layout.y[col[-1]] - layout.y[col[0]]
        minimal = sum(required_gap(a, b, params) for a, b in zip(col, col[1:]))
        total += max(0.0, extent - minimal)
    return total


def _gap_edges(edges):
    by_gap = {}
    for e in edges:
        by_gap.setdefault(e[1].time, []).append(e)
    return [by_gap[h] for h in sorted(by_gap)]


def _edge_orders(edges, y):
    left = sorted(edges, key=lambda e: (y[e[0]], y[e[1]]))
    right = sorted(edges, key=lambda e: y[e[1]])
    return left, right


def evaluate(layout, trees, instance=None):
    tree_nodes = {v for t in trees for v in t.nodes()}
    if tree_nodes != set(layout.y):
        raise InconsistentInput("layout nodes differ from tree nodes")
    edges = [e for t in trees for e in t.edges()]
    if len(edges) != len(layout.edges) or set(edges) != set(layout.edges):
        raise InconsistentInput("layout edges differ from tree edges")
    if instance is not None:
        actors = set(instance.actor_ids())
        if any(t.actor_id not in actors for t in trees):
            raise InconsistentInput("tree for an actor missing from the instance")
        if layout.schedule.columns and len(layout.schedule.columns) != instance.n_times:
            raise InconsistentInput("layout and instance disagree on the number of instants")

    y = layout.y
    lines = blocks = planarity = 0
    exact = True
    for gap in _gap_edges(edges):
        left, right = _edge_orders(gap, y)
        lines += count_line_crossings(left, right)
        b, ok = count_block_crossings_bound(left, right)
        blocks += b
        exact = exact and ok
        by_actor = {}
        for e in gap:
            by_actor.setdefault(e[1].actor, []).append(e)
        for own in by_actor.values():
            planarity += count_line_crossings(*_edge_orders(own, y))

    deltas = [abs(y[c] - y[p]) for p, c in edges]
    return MetricsReport(
        line_crossings=lines,
        block_crossings=blocks,
        block_crossings_exact=exact,
        wiggle_count=sum(1 for d in deltas if d > WIGGLE_EPS),
        wiggle_magnitude=float(sum(deltas)),
        white_space=white_space(layout),
        planarity_violations=planarity,
        continuity_violations=continuity_violations(trees),
        branch_degree_excess=branch_degree_excess(trees),
    )
