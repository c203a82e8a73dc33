"""Storyline instances and actor-tree construction.

An actor that belongs to several groups at the same instant is drawn as a
tree: one node per (instant, active group), or a single ungrouped node when
the actor is alive but in no group. Trees hang off a virtual root that is
never drawn.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .exceptions import Issue, TimeOutOfRange, UnknownActor, raise_issues

#: group id of the ungrouped node u_{h,0}
NONE = None
#: parent of the first life-time nodes
ROOT = None

_COLOR_RE = re.compile(r"^#[0-9a-fA-F]{6}$")


@dataclass(frozen=True)
class TimeAxis:
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class Actor:
    id: str
    display_name: str = ""
    color: Optional[str] = None

    def __post_init__(self):
        if not self.display_name:
            object.__setattr__(self, "display_name", self.id)


@dataclass(frozen=True)
class Group:
    id: str
    members: frozenset
    begin: int
    end: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def active_at(self, h):
        return self.begin <= h <= self.end


@dataclass(frozen=True)
class StorylineInstance:
    time_axis: TimeAxis
    actors: tuple
    groups: tuple

    def __post_init__(self):
        object.__setattr__(self, "actors", tuple(self.actors))
        object.__setattr__(self, "groups", tuple(self.groups))

    @property
    def n_times(self):
        return len(self.time_axis)

    def actor(self, actor_id):
        for a in self.actors:
            if a.id == actor_id:
                return a
        raise UnknownActor([Issue("UnknownActor", actor_id, "no such actor")])

    def actor_ids(self):
        return [a.id for a in self.actors]

    def group(self, group_id):
        for g in self.groups:
            if g.id == group_id:
                return g
        raise KeyError(group_id)


class TreeNode(NamedTuple):
    """Node u_{h,i} of an actor tree; ``group`` is NONE for u_{h,0}."""

    actor: str
    time: int
    group: Optional[str]

    def __repr__(self):
        g = "-" if self.group is None else self.group
        return f"<{self.actor}@{self.time}:{g}>"


def group_key(group_id):
    """Sort key on group ids with NONE first."""
    return (0, "") if group_id is None else (1, group_id)


def node_key(node):
    return (node.actor, node.time, group_key(node.group))


@dataclass
class ActorTree:
    """Tree of one actor.

    ``levels`` maps each life-time instant to its nodes (sorted by group id);
    ``parent`` maps each node to its parent node, or ROOT.
    """

    actor_id: str
    levels: dict
    parent: dict = field(default_factory=dict)

    @property
    def first(self):
        return min(self.levels)

    @property
    def last(self):
        return max(self.levels)

    def nodes(self):
        for h in sorted(self.levels):
            yield from self.levels[h]

    def children(self, node):
        return [v for v in self.levels.get(node.time + 1, ()) if self.parent[v] == node]

    def child_counts(self, h):
        counts = {u: 0 for u in self.levels[h]}
        for v in self.levels.get(h + 1, ()):
            counts[self.parent[v]] += 1
        return counts

    def edges(self):
        """Drawn (parent, child) edges, root edges excluded."""
        return [(self.parent[v], v) for v in self.nodes() if self.parent[v] is not ROOT]

    def root_children(self):
        return [v for v in self.nodes() if self.parent[v] is ROOT]

    def with_parents(self, parent):
        return ActorTree(self.actor_id, self.levels, dict(parent))

    def __eq__(self, other):
        if not isinstance(other, ActorTree):
            return NotImplemented
        return (self.actor_id, self.levels, self.parent) == (other.actor_id, other.levels, other.parent)


def validate_instance(raw: StorylineInstance) -> StorylineInstance:
    """Return ``raw`` if every invariant holds, else raise listing all issues."""
    issues = []
    T = len(raw.time_axis)
    if T == 0:
        issues.append(Issue("TimeOutOfRange", "time_axis", "time axis is empty"))
    seen = set()
    for a in raw.actors:
        if a.id in seen:
            issues.append(Issue("DuplicateId", a.id, "actor id used twice"))
        seen.add(a.id)
        if a.color is not None and not _COLOR_RE.match(a.color):
            issues.append(Issue("SchemaError", a.id, f"color {a.color!r} is not #rrggbb"))
    if not raw.groups:
        issues.append(Issue("EmptyMembers", "groups", "instance has no groups"))
    gseen = set()
    for g in raw.groups:
        if g.id in gseen:
            issues.append(Issue("DuplicateId", g.id, "group id used twice"))
        gseen.add(g.id)
        if not g.members:
            issues.append(Issue("EmptyMembers", g.id, "group has no members"))
        for m in sorted(g.members - seen):
            issues.append(Issue("UnknownActor", g.id, f"member {m!r} is not an actor"))
        if not (0 <= g.begin <= g.end < T):
            issues.append(Issue("TimeOutOfRange", g.id,
                                f"interval [{g.begin}, {g.end}] not within [0, {T - 1}]"))
    raise_issues(issues)
    return raw


def _check_actor(instance, actor_id):
    if actor_id not in instance.actor_ids():
        raise UnknownActor([Issue("UnknownActor", actor_id, "no such actor")])


def life_time(instance, actor_id):
    """``(first, last)`` instants at which the actor is in some group, or None."""
    _check_actor(instance, actor_id)
    spans = [(g.begin, g.end) for g in instance.groups if actor_id in g.members]
    if not spans:
        return None
    return min(b for b, _ in spans), max(e for _, e in spans)


def active_groups_at(instance, actor_id, h):
    _check_actor(instance, actor_id)
    if not 0 <= h < instance.n_times:
        raise TimeOutOfRange([Issue("TimeOutOfRange", actor_id, f"instant {h} outside the axis")])
    return {g.id for g in instance.groups if actor_id in g.members and g.active_at(h)}


def _build_tree(instance, actor_id):
    span = life_time(instance, actor_id)
    if span is None:
        return None
    first, last = span
    levels = {}
    parent = {}
    for h in range(first, last + 1):
        gids = sorted(active_groups_at(instance, actor_id, h))
        level = [TreeNode(actor_id, h, g) for g in gids] or [TreeNode(actor_id, h, NONE)]
        levels[h] = level
        if h == first:
            for v in level:
                parent[v] = ROOT
            continue
        prev = levels[h - 1]
        prev_by_group = {u.group: u for u in prev if u.group is not None}
        counts = {u: 0 for u in prev}
        orphans = []
        for v in level:
            u = prev_by_group.get(v.group) if v.group is not None else None
            if u is not None:
                parent[v] = u
                counts[u] += 1
            else:
                orphans.append(v)
        # round robin: least-loaded previous node, ties by group id
        for v in sorted(orphans, key=lambda n: group_key(n.group)):
            u = min(prev, key=lambda n: (counts[n], group_key(n.group)))
            parent[v] = u
            counts[u] += 1
    return ActorTree(actor_id, levels, parent)


def build_actor_trees(instance):
    """Step 1: one degree-balanced tree per actor with a non-empty life-time."""
    trees = []
    for a in instance.actors:
        t = _build_tree(instance, a.id)
        if t is not None:
            trees.append(t)
    return trees
