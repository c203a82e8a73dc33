"""Storyline layouts in which an actor may belong to several groups at once."""
from .crossmin import (
    PathLine,
    PermutationSchedule,
    count_block_crossings,
    count_line_crossings,
    decompose_to_paths,
    optimize_permutations,
    recombine_paths,
)
from .ingest import (
    PublicationRecord,
    derive_groups,
    parse_instance,
    parse_publications,
    serialize_instance,
)
from .metrics import MetricsReport, branch_degree_excess, continuity_violations, evaluate, white_space
from .model import (
    NONE,
    ROOT,
    Actor,
    ActorTree,
    Group,
    StorylineInstance,
    TimeAxis,
    TreeNode,
    active_groups_at,
    build_actor_trees,
    life_time,
    validate_instance,
)
from .pipeline import Layout, LayoutParams, assign_coordinates, run_pipeline, untangle_forest, untangle_tree
from .render import RenderOptions, render_svg

__version__ = "0.1.0"


def __getattr__(name):
    # sklearn is slow to import; only load it when the estimator is used
    if name == "StorylineLayout":
        from .estimator import StorylineLayout
        return StorylineLayout
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
