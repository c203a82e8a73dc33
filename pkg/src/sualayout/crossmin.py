"""Branch permutation: per-instant vertical orders with few block crossings.

Each actor tree is cut into edge-disjoint paths by duplicating every node
with k >= 2 children into k copies. The paths are then ordered column by
column as if they were the lines of a classical storyline, with the lines of
each active group kept contiguous. Finally the copies of each node are merged
back into one node.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .exceptions import ElementMismatch, InfeasibleContiguity
from .model import ROOT, group_key

#: largest permutation size on which block crossings are computed exactly
BFS_LIMIT = 7
EXACT_LINES = 8
EXACT_COLUMNS = 12
SWEEP_ROUNDS = 4


@dataclass(frozen=True)
class PathLine:
    """One path of the decomposition, drawn as a line.

    ``nodes`` holds one tree node per instant of the span. For a path that
    starts at a duplicated node (``primary`` is False) the first entry is the
    copy of the branching node.
    """

    id: str
    actor_id: str
    nodes: tuple
    inherited_group: Optional[str] = None
    primary: bool = True

    @property
    def first(self):
        return self.nodes[0].time

    @property
    def last(self):
        return self.nodes[-1].time

    @property
    def span(self):
        return self.first, self.last

    def live_at(self, h):
        return self.first <= h <= self.last

    def node_at(self, h):
        return self.nodes[h - self.first]

    def is_copy_at(self, h):
        return not self.primary and h == self.first

    def group_at(self, h):
        """Group the line belongs to at ``h`` for contiguity purposes."""
        if self.is_copy_at(h):
            return self.inherited_group
        return self.node_at(h).group

    def edges(self):
        return list(zip(self.nodes, self.nodes[1:]))


@dataclass(frozen=True)
class PermutationSchedule:
    """Vertical order of the live elements at each instant, top to bottom."""

    columns: tuple
    exact: bool = True
    block_crossings: int = 0
    block_crossings_exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(tuple(c) for c in self.columns))

    def __len__(self):
        return len(self.columns)

    def positions(self, h):
        return {x: i for i, x in enumerate(self.columns[h])}


# -- crossing counters --------------------------------------------------------

def _relative(order_a, order_b):
    if len(order_a) != len(order_b) or set(order_a) != set(order_b):
        raise ElementMismatch(f"orders differ in their elements: {sorted(map(str, set(order_a) ^ set(order_b)))}")
    if len(set(order_a)) != len(order_a):
        raise ElementMismatch("orders contain repeated elements")
    index = {x: i for i, x in enumerate(order_a)}
    return tuple(index[x] for x in order_b)


def _inversions(seq):
    seq = list(seq)
    if len(seq) < 2:
        return seq, 0
    mid = len(seq) // 2
    left, a = _inversions(seq[:mid])
    right, b = _inversions(seq[mid:])
    merged, inv, i, j = [], a + b, 0, 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            inv += len(left) - i
            j += 1
    merged += left[i:] + right[j:]
    return merged, inv


def count_line_crossings(order_a, order_b):
    """Pairs of elements whose relative order differs between the two orders."""
    return _inversions(_relative(order_a, order_b))[1]


def _block_moves(n):
    return [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n + 1)]


def _apply(p, i, j, k):
    return p[:i] + p[j:k] + p[i:j] + p[k:]


@lru_cache(maxsize=None)
def _bt_table(n):
    """Block-transposition distance from the identity to every permutation of n."""
    start = tuple(range(n))
    dist = {start: 0}
    queue = deque([start])
    moves = _block_moves(n)
    while queue:
        p = queue.popleft()
        d = dist[p] + 1
        for i, j, k in moves:
            q = _apply(p, i, j, k)
            if q not in dist:
                dist[q] = d
                queue.append(q)
    return dist


def reduce_permutation(perm):
    """Contract maximal runs of consecutive values (framed by 0 and n+1).

    Sorting by block transpositions never needs to break such a run, so the
    reduced permutation has the same distance.
    """
    n = len(perm)
    framed = [-1] + list(perm) + [n]
    runs = [[framed[0]]]
    for x in framed[1:]:
        if x == runs[-1][-1] + 1:
            runs[-1].append(x)
        else:
            runs.append([x])
    heads = [r[0] for r in runs[1:-1]]
    rank = {v: i for i, v in enumerate(sorted(heads))}
    return tuple(rank[v] for v in heads)


def _greedy_block_sort(perm):
    """Upper bound: repeatedly pull the next missing value into place."""
    p = list(perm)
    moves = 0
    for i in range(len(p)):
        if p[i] == i:
            continue
        j = p.index(i)
        k = j + 1
        while k < len(p) and p[k] == p[k - 1] + 1:
            k += 1
        p = _apply(p, i, j, k)
        moves += 1
    return moves


def block_distance(perm, limit=BFS_LIMIT):
    """``(distance, exact)`` for sorting ``perm`` by block transpositions."""
    r = reduce_permutation(perm)
    if len(r) <= limit:
        return _bt_table(len(r))[r], True
    return _greedy_block_sort(r), False


def count_block_crossings_bound(order_a, order_b, limit=BFS_LIMIT):
    return block_distance(_relative(order_a, order_b), limit)


def count_block_crossings(order_a, order_b):
    """Fewest swaps of two adjacent blocks turning ``order_a`` into ``order_b``.

    Exact up to ``BFS_LIMIT`` elements after reduction, a greedy upper bound
    beyond that (use :func:`count_block_crossings_bound` to get the flag).
    """
    return count_block_crossings_bound(order_a, order_b)[0]


# -- path decomposition -------------------------------------------------------

def _continuing_child(node, children):
    if not children:
        return None
    if node is not ROOT and node.group is not None:
        for c in children:
            if c.group == node.group:
                return c
    return min(children, key=lambda c: group_key(c.group))


def _inherit(tree, head, nodes):
    g = head.group
    if g is None:
        return None
    for v in nodes[1:]:
        if v.group != g and any(u.group == g for u in tree.levels.get(v.time, ())):
            return None
    return g


def _tree_paths(tree):
    kids = {}
    for v in tree.nodes():
        kids.setdefault(tree.parent[v], []).append(v)
    for k in kids:
        kids[k].sort(key=lambda c: group_key(c.group))

    queue = deque(([c], True) for c in kids.get(ROOT, []))
    paths = []
    while queue:
        nodes, primary = queue.popleft()
        u = nodes[-1]
        while True:
            ch = kids.get(u, [])
            cont = _continuing_child(u, ch)
            for c in ch:
                if c is not cont:
                    queue.append(([u, c], False))
            if cont is None:
                break
            nodes.append(cont)
            u = cont
        inherited = None if primary else _inherit(tree, nodes[0], nodes)
        paths.append(PathLine(f"{tree.actor_id}#{len(paths)}", tree.actor_id, tuple(nodes),
                              inherited, primary))
    return paths


def decompose_to_paths(trees):
    """Edge-disjoint path cover of every tree, in a deterministic order."""
    out = []
    for t in trees:
        out.extend(_tree_paths(t))
    return out


# -- column orders ------------------------------------------------------------

def _column_blocks(paths, h):
    """Contiguity blocks at ``h``: grouped lines first by first member, singletons."""
    blocks = {}
    order = []
    for p in paths:
        if not p.live_at(h):
            continue
        g = p.group_at(h)
        key = ("g", g) if g is not None else ("s", p.id)
        if key not in blocks:
            blocks[key] = []
            order.append(key)
        blocks[key].append(p.id)
    return [blocks[k] for k in order]


def _check_blocks(blocks):
    seen = set()
    for b in blocks:
        for x in b:
            if x in seen:
                raise InfeasibleContiguity(f"line {x} would sit in two blocks")
            seen.add(x)


def feasible_orders(blocks):
    """All orders keeping every block contiguous, in a fixed order."""
    _check_blocks(blocks)
    inner = [list(itertools.permutations(b)) for b in blocks]
    for bperm in itertools.permutations(range(len(blocks))):
        for choice in itertools.product(*(inner[i] for i in bperm)):
            yield tuple(itertools.chain.from_iterable(choice))


def _restrict(order, keep):
    return tuple(x for x in order if x in keep)


@lru_cache(maxsize=None)
def _perm_graph(n):
    """All permutations of n (lexicographic) and their block-transposition neighbours."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    perms = perms.reshape(len(perms) or 1, n)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    keys = perms @ weights
    nbrs = []
    for i, j, k in _block_moves(n):
        idx = list(range(i)) + list(range(j, k)) + list(range(i, j)) + list(range(k, n))
        nbrs.append(np.searchsorted(keys, perms[:, idx] @ weights))
    nbrs = np.stack(nbrs, axis=1) if nbrs else np.zeros((len(perms), 0), dtype=np.int64)
    index = {tuple(p): i for i, p in enumerate(perms.tolist())}
    return index, nbrs


def _min_plus(sources, targets, common):
    """For every target order of ``common``, min over sources of cost + distance.

    ``sources`` maps orders of ``common`` to ``((crossings, tiebreak), tag)``;
    distance is added to the crossing part only. Returns a dict
    target -> (cost, source order). Solved by relaxing all permutations of
    ``common`` at once over the block-transposition graph.
    """
    index, nbrs = _perm_graph(len(common))
    label = {x: i for i, x in enumerate(common)}
    srcs = sorted(sources)
    big = 1 + max(c[1] for c, _ in sources.values())
    dist = np.full(len(nbrs), np.iinfo(np.int64).max // 4, dtype=np.int64)
    origin = np.full(len(nbrs), -1, dtype=np.int64)
    for k, r in enumerate(srcs):
        (b, tie), _ = sources[r]
        i = index[tuple(label[x] for x in r)]
        if b * big + tie < dist[i]:
            dist[i] = b * big + tie
            origin[i] = k
    rows = np.arange(len(nbrs))
    while nbrs.shape[1]:
        cand = dist[nbrs] + big
        j = np.argmin(cand, axis=1)
        best = cand[rows, j]
        better = best < dist
        if not better.any():
            break
        dist = np.where(better, best, dist)
        origin = np.where(better, origin[nbrs[rows, j]], origin)
    out = {}
    for s in targets:
        i = index[tuple(label[x] for x in s)]
        d = int(dist[i])
        out[s] = ((d // big, d % big), srcs[origin[i]])
    return out


def _copy_spread(paths_at, order, h):
    """How far node copies sit from their node's own line (tie-break only)."""
    pos = {x: i for i, x in enumerate(order)}
    owner = {}
    for x in order:
        p = paths_at[x]
        if not p.is_copy_at(h):
            owner[p.node_at(h)] = pos[x]
    return sum(abs(pos[x] - owner[paths_at[x].node_at(h)]) - 1
               for x in order if paths_at[x].is_copy_at(h))


def _exact_orders(paths, T):
    """Viterbi over feasible column orders; block crossings first, copy spread second."""
    rank = {p.id: i for i, p in enumerate(paths)}
    by_id = {p.id: p for p in paths}
    live = [{p.id for p in paths if p.live_at(h)} for h in range(T)]
    cost = {o: (0, _copy_spread(by_id, o, 0)) for o in feasible_orders(_column_blocks(paths, 0))}
    back = [None]
    for h in range(1, T):
        common = sorted(live[h - 1] & live[h], key=rank.__getitem__)
        keep = set(common)
        sources = {}
        for o, c in cost.items():
            r = _restrict(o, keep)
            if r not in sources or c < sources[r][0]:
                sources[r] = (c, o)
        cur = list(feasible_orders(_column_blocks(paths, h)))
        targets = {_restrict(o, keep) for o in cur}
        best = _min_plus(sources, targets, common)
        cost = {}
        links = {}
        for o in cur:
            (b, tie), r = best[_restrict(o, keep)]
            cost[o] = (b, tie + _copy_spread(by_id, o, h))
            links[o] = sources[r][1]
        back.append(links)
    o = min(cost, key=lambda k: cost[k])
    total = cost[o][0]
    cols = [o]
    for h in range(T - 1, 0, -1):
        o = back[h][o]
        cols.append(o)
    cols.reverse()
    return cols, total


def schedule_block_crossings(columns, limit=BFS_LIMIT):
    """Sum of block crossings between consecutive columns over common elements."""
    total, exact = 0, True
    for a, b in zip(columns, columns[1:]):
        common = set(a) & set(b)
        d, ok = count_block_crossings_bound(_restrict(a, common), _restrict(b, common), limit)
        total += d
        exact = exact and ok
    return total, exact


def _arrange(blocks, bary, current):
    """Sort blocks by mean barycenter, members by own barycenter; stable on ties."""
    pos = {x: i for i, x in enumerate(current)}

    def key(x):
        return (bary.get(x, pos[x]), pos[x])

    arranged = []
    for b in blocks:
        members = sorted(b, key=key)
        mean = sum(key(x)[0] for x in members) / len(members)
        arranged.append(((mean, min(pos[x] for x in members)), members))
    arranged.sort(key=lambda t: t[0])
    return tuple(itertools.chain.from_iterable(m for _, m in arranged))


def _sweep_orders(paths, T):
    rank = {p.id: i for i, p in enumerate(paths)}
    by_id = {p.id: p for p in paths}
    blocks = [_column_blocks(paths, h) for h in range(T)]
    for bl in blocks:
        _check_blocks(bl)
    cols = []
    for h in range(T):
        live = sorted((x for b in blocks[h] for x in b), key=rank.__getitem__)
        cols.append(_arrange(blocks[h], {x: rank[x] for x in live}, live))

    def neighbour_bary(h, ref):
        pos = {x: i for i, x in enumerate(cols[ref])}
        bary = {}
        for x in cols[h]:
            if x in pos:
                bary[x] = pos[x]
        # lines absent from the reference column follow a line through the same node
        here = {x: i for i, x in enumerate(cols[h])}
        for x in cols[h]:
            if x in bary:
                continue
            node = by_id[x].node_at(h)
            mates = [y for y in cols[h] if y != x and y in bary and by_id[y].node_at(h) == node]
            bary[x] = bary[mates[0]] if mates else here[x] * len(cols[ref]) / max(1, len(cols[h]))
        return bary

    best = (schedule_block_crossings(cols), list(cols))
    for _ in range(SWEEP_ROUNDS):
        for h in range(1, T):
            cols[h] = _arrange(blocks[h], neighbour_bary(h, h - 1), cols[h])
        for h in range(T - 2, -1, -1):
            cols[h] = _arrange(blocks[h], neighbour_bary(h, h + 1), cols[h])
        score = schedule_block_crossings(cols)
        if score[0] < best[0][0]:
            best = (score, list(cols))
    return best[1]


def optimize_permutations(paths, instance=None, exact_lines=EXACT_LINES, exact_columns=EXACT_COLUMNS):
    """Step 2: contiguity-respecting column orders with few block crossings.

    Exact (minimum total) when at most ``exact_lines`` lines are live at every
    instant and there are at most ``exact_columns`` instants; a barycenter
    sweep otherwise.
    """
    paths = list(paths)
    if instance is not None:
        T = instance.n_times
    else:
        T = max((p.last for p in paths), default=-1) + 1
    if T <= 0:
        return PermutationSchedule((), True, 0, True)
    width = max(sum(1 for p in paths if p.live_at(h)) for h in range(T))
    exact = width <= exact_lines and T <= exact_columns
    if exact:
        cols, _ = _exact_orders(paths, T)
    else:
        cols = _sweep_orders(paths, T)
    total, flag = schedule_block_crossings(cols)
    return PermutationSchedule(cols, exact, total, flag)


# -- recombination ------------------------------------------------------------

def recombine_paths(paths, schedule, trees):
    """Merge node copies back; each node takes the slot of its continuing copy.

    Nodes are points, so two edges at a merged node can only meet at that
    node; ordering the merged node's child edges by child position (the
    rewiring that removes a crossing between copies) is therefore implied by
    the node order. Returns the trees and a node-level schedule.
    """
    by_id = {p.id: p for p in paths}
    columns = []
    for h, col in enumerate(schedule.columns):
        nodes = []
        for pid in col:
            p = by_id[pid]
            if not p.is_copy_at(h):
                nodes.append(p.node_at(h))
        columns.append(tuple(nodes))
    expected = {}
    for t in trees:
        for v in t.nodes():
            expected.setdefault(v.time, set()).add(v)
    for h, col in enumerate(columns):
        if set(col) != expected.get(h, set()) or len(col) != len(set(col)):
            raise InfeasibleContiguity(f"column {h}: merged nodes do not match the trees")
    merged = PermutationSchedule(columns, schedule.exact, *schedule_block_crossings(columns))
    return [t.with_parents(t.parent) for t in trees], merged
