"""Actor-tree untangling, coordinate assignment and the end-to-end run."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .crossmin import (
    EXACT_COLUMNS,
    EXACT_LINES,
    PermutationSchedule,
    decompose_to_paths,
    optimize_permutations,
    recombine_paths,
)
from .exceptions import BadParams
from .metrics import WIGGLE_EPS, MetricsReport, evaluate, required_gap
from .model import ROOT, ActorTree, build_actor_trees, validate_instance

__all__ = [
    "Layout", "LayoutParams", "MetricsReport", "untangle_tree", "untangle_forest",
    "assign_coordinates", "run_pipeline", "self_crossings",
]


@dataclass(frozen=True)
class LayoutParams:
    unit: float = 1.0
    group_gap: float = 1.0
    block_gap: float = 3.0
    smoothing_rounds: int = 10
    column_width: float = 1.0
    exact_lines: int = EXACT_LINES
    exact_columns: int = EXACT_COLUMNS

    def check(self):
        for name in ("unit", "group_gap", "block_gap", "column_width"):
            if not getattr(self, name) > 0:
                raise BadParams(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.smoothing_rounds < 0:
            raise BadParams("smoothing_rounds must be >= 0")
        if self.exact_lines < 0 or self.exact_columns < 0:
            raise BadParams("exactness budget must be >= 0")
        return self


@dataclass
class Layout:
    schedule: PermutationSchedule
    y: dict
    x: list
    edges: list
    params: LayoutParams = field(default_factory=LayoutParams)


# -- untangling ---------------------------------------------------------------

def _gap_pairs(tree, h, pos):
    """Crossing pairs of tree edges entering instant ``h``, best candidate first."""
    edges = [(tree.parent[v], v) for v in tree.levels.get(h, ()) if tree.parent[v] is not ROOT]
    pairs = []
    for e, f in itertools.combinations(edges, 2):
        (p, q), (r, s) = e, f
        if (pos[p] - pos[r]) * (pos[q] - pos[s]) >= 0:
            continue
        if pos[p] > pos[r]:
            e, f = f, e
        (p, q), (r, s) = e, f
        # swaps that keep group-continuity edges go first
        keeps_continuity = p.group != q.group and r.group != s.group
        pairs.append(((not keeps_continuity, pos[p], pos[r], pos[q], pos[s]), e, f))
    pairs.sort(key=lambda t: t[0])
    return pairs


def _positions(schedule):
    pos = {}
    for h in range(len(schedule.columns)):
        pos.update(schedule.positions(h))
    return pos


def self_crossings(tree, schedule):
    """Number of crossing pairs among the edges of one tree."""
    pos = _positions(schedule)
    return sum(len(_gap_pairs(tree, h, pos)) for h in tree.levels)


def untangle_tree(tree, schedule, return_swaps=False):
    """Swap the children of crossing edge pairs until the tree is planar.

    Degrees never change and every swap removes at least one crossing.
    """
    pos = _positions(schedule)
    parent = dict(tree.parent)
    work = ActorTree(tree.actor_id, tree.levels, parent)
    swaps = 0
    for h in sorted(tree.levels):
        while True:
            pairs = _gap_pairs(work, h, pos)
            if not pairs:
                break
            _, (p, q), (r, s) = pairs[0]
            parent[q], parent[s] = r, p
            swaps += 1
    out = tree.with_parents(parent)
    return (out, swaps) if return_swaps else out


def untangle_forest(trees, schedule):
    return [untangle_tree(t, schedule) for t in trees]


# -- coordinates --------------------------------------------------------------

def _runs(col):
    """Maximal runs of consecutive nodes in the same group."""
    runs = [[0]] if col else []
    for i in range(1, len(col)):
        a, b = col[i - 1], col[i]
        if a.group is not None and a.group == b.group:
            runs[-1].append(i)
        else:
            runs.append([i])
    return runs


def _pool_point(values):
    """L1-optimal point of ``values``; ties broken toward their mean."""
    n = len(values)
    lo, hi = values[(n - 1) // 2], values[n // 2]
    return min(max(sum(values) / n, lo), hi)


def _l1_isotonic(value_lists):
    """Non-decreasing z minimizing sum |z_k - v| over each list (PAVA with medians)."""
    pools = []  # [sorted values, block count, point]
    for vals in value_lists:
        vals = sorted(vals)
        pools.append([vals, 1, _pool_point(vals)])
        while len(pools) > 1 and pools[-2][2] > pools[-1][2]:
            v2, n2, _ = pools.pop()
            v1, n1, _ = pools.pop()
            merged = sorted(v1 + v2)
            pools.append([merged, n1 + n2, _pool_point(merged)])
    out = []
    for _, n, point in pools:
        out.extend([point] * n)
    return out


def _wiggle(edges, y):
    return sum(abs(y[c] - y[p]) for p, c in edges)


def _smooth_column(col, gaps, runs, y, nbrs):
    """Place the column's group blocks at their jointly L1-best positions."""
    inner = [[y[col[i]] - y[col[r[0]]] for i in r] for r in runs]
    offsets, acc = [], 0.0
    for k, run in enumerate(runs):
        if k:
            prev = runs[k - 1][-1]
            acc += inner[k - 1][-1] + gaps[prev]
        offsets.append(acc)
    value_lists = []
    for k, run in enumerate(runs):
        vals = [y[u] - off - offsets[k] for i, off in zip(run, inner[k]) for u in nbrs[col[i]]]
        value_lists.append(vals or [y[col[run[0]]] - offsets[k]])
    z = _l1_isotonic(value_lists)
    for k, run in enumerate(runs):
        for i, off in zip(run, inner[k]):
            y[col[i]] = z[k] + offsets[k] + off


def assign_coordinates(trees, schedule, params=None):
    """Step 4: slot every node in schedule order, then smooth.

    Nodes are packed at the minimum gaps. Each smoothing round then re-places
    every column, group blocks moving as units, at the positions that
    minimize the column's total vertical offset to its tree neighbours
    (leaning toward their mean on ties). Order and gaps are kept and wiggle
    never grows.
    """
    params = (params or LayoutParams()).check()
    cols = schedule.columns
    gaps = [[required_gap(a, b, params) for a, b in zip(col, col[1:])] for col in cols]
    y = {}
    for col, g in zip(cols, gaps):
        acc = 0.0
        for i, v in enumerate(col):
            acc += g[i - 1] if i else 0.0
            y[v] = acc

    edges = [e for t in trees for e in t.edges()]
    edges.sort(key=lambda e: (e[1].time, y[e[1]]))
    nbrs = {v: [] for v in y}
    for p, c in edges:
        nbrs[p].append(c)
        nbrs[c].append(p)
    runs = [_runs(col) for col in cols]

    total = _wiggle(edges, y)
    for r in range(params.smoothing_rounds):
        before = total
        order = range(len(cols)) if r % 2 == 0 else range(len(cols) - 1, -1, -1)
        for h in order:
            _smooth_column(cols[h], gaps[h], runs[h], y, nbrs)
        total = _wiggle(edges, y)
        assert total <= before + 1e-6, "smoothing increased wiggle"

    if y:
        low = min(y.values())
        y = {v: yy - low for v, yy in y.items()}
    x = [h * params.column_width for h in range(len(cols))]
    return Layout(schedule, y, x, edges, params)


# -- orchestration ------------------------------------------------------------

@dataclass
class PipelineResult:
    instance: object
    trees: list
    paths: list
    path_schedule: PermutationSchedule
    schedule: PermutationSchedule
    layout: Layout
    metrics: MetricsReport


def run_stages(instance, params=None):
    """Run every step and keep the intermediate results."""
    params = (params or LayoutParams()).check()
    instance = validate_instance(instance)
    trees = build_actor_trees(instance)
    paths = decompose_to_paths(trees)
    path_schedule = optimize_permutations(paths, instance, params.exact_lines, params.exact_columns)
    trees, schedule = recombine_paths(paths, path_schedule, trees)
    trees = untangle_forest(trees, schedule)
    layout = assign_coordinates(trees, schedule, params)
    report = evaluate(layout, trees, instance)
    return PipelineResult(instance, trees, paths, path_schedule, schedule, layout, report)


def run_pipeline(instance, params=None):
    res = run_stages(instance, params)
    return res.layout, res.metrics
