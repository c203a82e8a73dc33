import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_instance, random_tangled_tree
from oracles import tree_self_crossings
from sualayout.crossmin import PermutationSchedule
from sualayout.datasets import load_instance
from sualayout.exceptions import BadParams
from sualayout.metrics import required_gap
from sualayout.model import ROOT, Actor, ActorTree, Group, StorylineInstance, TimeAxis, TreeNode
from sualayout.pipeline import (
    LayoutParams,
    assign_coordinates,
    run_pipeline,
    run_stages,
    self_crossings,
    untangle_forest,
    untangle_tree,
)


def degree_multiset(tree):
    return Counter((u, len(tree.children(u))) for u in tree.nodes())


def ladder(actor, width, T, parent_of):
    """Tree with ``width`` nodes per instant; ``parent_of(h, i)`` picks the parent index."""
    levels = {h: [TreeNode(actor, h, f"G{i}") for i in range(width)] for h in range(T)}
    parent = {v: ROOT for v in levels[0]}
    for h in range(1, T):
        for i, v in enumerate(levels[h]):
            parent[v] = levels[h - 1][parent_of(h, i)]
    tree = ActorTree(actor, levels, parent)
    sched = PermutationSchedule([levels[h] for h in range(T)])
    return tree, sched


class TestUntangle:
    def test_planar_tree_unchanged(self):
        tree, sched = ladder("a", 3, 4, lambda h, i: i)
        out, swaps = untangle_tree(tree, sched, return_swaps=True)
        assert out == tree and swaps == 0

    def test_single_crossing(self):
        tree, sched = ladder("a", 2, 2, lambda h, i: 1 - i)
        assert self_crossings(tree, sched) == 1
        out, swaps = untangle_tree(tree, sched, return_swaps=True)
        assert swaps == 1
        assert self_crossings(out, sched) == 0
        assert degree_multiset(out) == degree_multiset(tree)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_tangle(self, seed):
        tree, sched = random_tangled_tree(random.Random(seed))
        before = tree_self_crossings(tree, sched)
        assert before >= 1
        out, swaps = untangle_tree(tree, sched, return_swaps=True)
        assert tree_self_crossings(out, sched) == 0
        assert degree_multiset(out) == degree_multiset(tree)
        assert swaps <= before

    def test_continuity_edges_kept_when_possible(self):
        # G0 -> G0 continues; the crossing is between the two other edges
        levels = {0: [TreeNode("a", 0, g) for g in ("G0", "G1", "G2")],
                  1: [TreeNode("a", 1, g) for g in ("G0", "G3", "G4")]}
        p = {v: ROOT for v in levels[0]}
        p[levels[1][0]] = levels[0][0]
        p[levels[1][1]] = levels[0][2]
        p[levels[1][2]] = levels[0][1]
        tree = ActorTree("a", levels, p)
        out = untangle_tree(tree, PermutationSchedule([levels[0], levels[1]]))
        assert out.parent[levels[1][0]] == levels[0][0]
        assert self_crossings(out, PermutationSchedule([levels[0], levels[1]])) == 0

    def test_forest(self):
        t1, sched = ladder("a", 3, 3, lambda h, i: 2 - i)
        assert untangle_forest([], sched) == []
        # two tangled trees sharing columns
        t2levels = {h: [TreeNode("b", h, f"G{i}") for i in range(2)] for h in range(3)}
        t2parent = {v: ROOT for v in t2levels[0]}
        for h in (1, 2):
            t2parent[t2levels[h][0]] = t2levels[h - 1][1]
            t2parent[t2levels[h][1]] = t2levels[h - 1][0]
        t2 = ActorTree("b", t2levels, t2parent)
        cols = [tuple(t1.levels[h]) + tuple(t2levels[h]) for h in range(3)]
        sched = PermutationSchedule(cols)
        out = untangle_forest([t1, t2], sched)
        assert [tree_self_crossings(t, sched) for t in out] == [0, 0]

    def test_line_actors_untouched(self):
        inst = StorylineInstance(TimeAxis("0123"), [Actor("a"), Actor("b")],
                                 [Group("G", {"a", "b"}, 0, 1), Group("H", {"a"}, 2, 3),
                                  Group("K", {"b"}, 2, 3)])
        res = run_stages(inst)
        assert untangle_forest(res.trees, res.schedule) == res.trees


class TestCoordinates:
    def test_straight_line(self):
        inst = StorylineInstance(TimeAxis("012"), [Actor("a")], [Group("G", {"a"}, 0, 2)])
        layout, report = run_pipeline(inst)
        assert len({layout.y[v] for v in layout.y}) == 1
        assert report.wiggle_magnitude == 0

    def test_strangers_kept_apart(self):
        inst = StorylineInstance(TimeAxis("0123"), [Actor("a"), Actor("b")],
                                 [Group("G", {"a"}, 0, 3), Group("H", {"b"}, 0, 3)])
        layout, _ = run_pipeline(inst)
        for col in layout.schedule.columns:
            assert abs(layout.y[col[1]] - layout.y[col[0]]) >= 3 - 1e-9

    def test_column_order_matches_schedule(self):
        res = run_stages(load_instance("overlap"))
        layout = res.layout
        for col in res.schedule.columns:
            assert tuple(sorted(col, key=layout.y.__getitem__)) == col

    def test_x_spacing(self):
        layout, _ = run_pipeline(load_instance("overlap"), LayoutParams(column_width=2.5))
        assert layout.x == [2.5 * h for h in range(6)]

    @pytest.mark.parametrize("kw", [dict(unit=0), dict(group_gap=-1), dict(block_gap=0),
                                    dict(column_width=0), dict(smoothing_rounds=-1)])
    def test_bad_params(self, kw):
        with pytest.raises(BadParams):
            assign_coordinates([], PermutationSchedule([]), LayoutParams(**kw))

    def test_smoothing_never_adds_wiggle(self):
        inst = load_instance("case_study_2")
        wiggles = [run_pipeline(inst, LayoutParams(smoothing_rounds=r))[1].wiggle_magnitude
                   for r in range(0, 8)]
        assert all(b <= a + 1e-9 for a, b in zip(wiggles, wiggles[1:]))
        assert wiggles[-1] < wiggles[0]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([(1.0, 1.0, 3.0), (2.0, 0.5, 4.0), (0.7, 1.3, 1.0)]))
def test_order_and_gaps(seed, spacing):
    unit, g_in, g_out = spacing
    params = LayoutParams(unit=unit, group_gap=g_in, block_gap=g_out)
    res = run_stages(random_instance(random.Random(seed)), params)
    layout = res.layout
    for col in layout.schedule.columns:
        assert tuple(sorted(col, key=layout.y.__getitem__)) == col
        for a, b in zip(col, col[1:]):
            assert layout.y[b] - layout.y[a] >= required_gap(a, b, params) - 1e-9
    for t in res.trees:
        assert tree_self_crossings(t, res.schedule) == 0


class TestRunPipeline:
    def test_single_line_all_zero(self):
        inst = StorylineInstance(TimeAxis("01"), [Actor("a")], [Group("G", {"a"}, 0, 1)])
        _, report = run_pipeline(inst)
        assert all(v == 0 for k, v in report.to_dict().items() if k != "block_crossings_exact")

    def test_overlap_branch(self):
        res = run_stages(load_instance("overlap"))
        a2 = next(t for t in res.trees if t.actor_id == "a2")
        assert len(a2.children(TreeNode("a2", 0, "G1"))) == 2

    def test_case_study_1_planar(self):
        res = run_stages(load_instance("case_study_1"))
        assert res.metrics.planarity_violations == 0
        assert sum(tree_self_crossings(t, res.schedule) for t in res.trees) == 0

    def test_degrees_survive_untangling(self):
        inst = load_instance("case_study_2")
        res = run_stages(inst)
        from sualayout.model import build_actor_trees
        before = {t.actor_id: sorted(Counter(len(t.children(u)) for u in t.nodes()).items())
                  for t in build_actor_trees(inst)}
        after = {t.actor_id: sorted(Counter(len(t.children(u)) for u in t.nodes()).items())
                 for t in res.trees}
        assert before == after
