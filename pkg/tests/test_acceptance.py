"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or as part of the
full suite; the result lines are written straight to the terminal.
"""
import itertools
import os
import random
import subprocess
import sys
import time
import xml.etree.ElementTree as ET
from collections import Counter

import pytest

from generators import random_instance, random_path_system, random_tangled_tree, rngs
from oracles import (
    bfs_block_distance,
    brute_force_min_block_crossings,
    geometric_crossings,
    pair_scan_inversions,
    tree_self_crossings,
)
from sualayout.cli import dump_json, layout_document
from sualayout.crossmin import count_block_crossings, count_line_crossings, optimize_permutations
from sualayout.datasets import FIXTURES, fixture_path, load_instance, load_publications
from sualayout.ingest import derive_groups
from sualayout.metrics import branch_degree_excess, required_gap
from sualayout.pipeline import run_stages, untangle_tree
from sualayout.render import render_svg


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} {title}"
        if detail:
            line += f" ({detail})"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


@pytest.fixture(scope="module")
def corpus():
    """The 200 random pipeline runs shared by criteria 1, 2 and 6."""
    instances = [random_instance(rng) for rng in rngs(200, seed=2024)]
    start = time.perf_counter()
    results = [run_stages(inst) for inst in instances]
    return results, time.perf_counter() - start


def test_1_actor_planarity(corpus, report):
    results, elapsed = corpus
    bad = 0
    for res in results:
        combinatorial = sum(tree_self_crossings(t, res.schedule) for t in res.trees)
        geometric = geometric_crossings(res.layout, same_actor_only=True)
        if res.metrics.planarity_violations or combinatorial or geometric:
            bad += 1
    report(1, "actor planarity on 200 random instances", bad == 0 and elapsed < 30,
           f"{bad} non-planar, {elapsed:.1f} s")


def test_2_degree_balance(corpus, report):
    results, _ = corpus
    unbalanced = excess = 0
    for res in results:
        excess += branch_degree_excess(res.trees)
        for t in res.trees:
            for h in range(t.first, t.last):
                counts = t.child_counts(h).values()
                if max(counts) - min(counts) > 1:
                    unbalanced += 1
    report(2, "degree balance and zero branch-degree excess", unbalanced == 0 and excess == 0,
           f"{unbalanced} unbalanced transitions, excess {excess}")


def test_3_block_crossing_exactness(report):
    mismatches = 0
    for rng in rngs(100, seed=7):
        paths, T = random_path_system(rng)
        got = optimize_permutations(paths)
        if not got.exact or got.block_crossings != brute_force_min_block_crossings(paths, T):
            mismatches += 1
    report(3, "exact block crossings equal brute force on 100 path systems", mismatches == 0,
           f"{mismatches} mismatches")


def test_4_crossing_count_oracles(report):
    rng = random.Random(11)
    line_bad = block_bad = 0
    for _ in range(5000):
        n = rng.randint(1, 6)
        a = rng.sample(range(n), n)
        b = rng.sample(range(n), n)
        line_bad += count_line_crossings(a, b) != pair_scan_inversions(a, b)
        block_bad += count_block_crossings(a, b) != bfs_block_distance(a, b)
    report(4, "line and block counts match pair-scan and BFS oracles on 5000 pairs",
           line_bad == 0 and block_bad == 0, f"{line_bad} line, {block_bad} block mismatches")


def test_5_untangling_contract(report):
    failures = 0
    for rng in rngs(100, seed=5):
        tree, sched = random_tangled_tree(rng)
        before = tree_self_crossings(tree, sched)
        out, swaps = untangle_tree(tree, sched, return_swaps=True)
        degrees = lambda t: Counter((u, len(t.children(u))) for u in t.nodes())
        if (tree_self_crossings(out, sched) != 0 or degrees(out) != degrees(tree)
                or swaps > before or before == 0):
            failures += 1
    report(5, "untangling 100 tangled trees", failures == 0, f"{failures} failures")


def test_6_order_preservation(corpus, report):
    results, _ = corpus
    order_bad = gap_bad = 0
    for res in results:
        y, params = res.layout.y, res.layout.params
        for col in res.layout.schedule.columns:
            if tuple(sorted(col, key=y.__getitem__)) != col:
                order_bad += 1
            for a, b in zip(col, col[1:]):
                if y[b] - y[a] < required_gap(a, b, params) - 1e-9:
                    gap_bad += 1
    report(6, "y order reproduces the schedule and minimum gaps hold", order_bad == gap_bad == 0,
           f"{order_bad} misordered columns, {gap_bad} short gaps")


def test_7_case_study_smoke(report):
    start = time.perf_counter()
    inst = derive_groups(load_publications("case_study_1_publications"))
    res = run_stages(inst)
    svg = render_svg(res.layout, inst)
    elapsed = time.perf_counter() - start
    labels = inst.time_axis.labels
    spans = {(labels[g.begin], labels[g.end]) for g in inst.groups
             if g.members == {"pink", "green", "blue"}}
    try:
        ET.fromstring(svg.encode())
        valid = True
    except ET.ParseError:
        valid = False
    ok = (len(inst.actors) == 5 and labels[0] == "1999" and labels[-1] == "2019"
          and ("2004", "2009") in spans and valid and elapsed < 5)
    report(7, "case study derives the 2004-2009 group and renders valid SVG", ok,
           f"{elapsed:.2f} s")


def _outputs(name):
    inst = load_instance(name)
    res = run_stages(inst)
    return dump_json(layout_document(res.layout, res.metrics)), render_svg(res.layout, inst)


def test_8_determinism(report, tmp_path):
    in_process = all(_outputs(n) == _outputs(n) for n in FIXTURES)
    # separate interpreters with different hash seeds must agree too
    outputs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        files = []
        for name, kind in itertools.product(FIXTURES, ("layout", "render")):
            out = tmp_path / f"{name}.{kind}.{seed}"
            subprocess.run([sys.executable, "-m", "sualayout.cli", kind, str(fixture_path(name)),
                            "-o", str(out)], env=env, check=True)
            files.append(out.read_bytes())
        outputs.append(files)
    report(8, "byte-identical layout JSON and SVG on every fixture",
           in_process and outputs[0] == outputs[1])
