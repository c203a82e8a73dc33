"""Estimator-style front end over the layout pipeline."""
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .crossmin import EXACT_COLUMNS, EXACT_LINES
from .pipeline import LayoutParams, run_stages
from .render import RenderOptions, render_svg
from .utils.validation import check_instance


class StorylineLayout(BaseEstimator):
    """Tree-based storyline layout for actors that may sit in several groups.

    ``fit`` runs the whole pipeline on one instance and stores
    ``trees_``, ``paths_``, ``schedule_``, ``layout_`` and ``metrics_``.

    Parameters
    ----------
    unit, group_gap, block_gap : float
        Vertical spacing: members of one group sit ``unit * group_gap``
        apart, different blocks ``unit * block_gap`` apart.
    smoothing_rounds : int
        Wiggle-reducing passes after slotting.
    column_width : float
        Horizontal distance between instants, in layout units.
    exact_lines, exact_columns : int
        Budget under which block crossings are minimized exactly.
    """

    def __init__(self, unit=1.0, group_gap=1.0, block_gap=3.0, smoothing_rounds=10,
                 column_width=1.0, exact_lines=EXACT_LINES, exact_columns=EXACT_COLUMNS):
        self.unit = unit
        self.group_gap = group_gap
        self.block_gap = block_gap
        self.smoothing_rounds = smoothing_rounds
        self.column_width = column_width
        self.exact_lines = exact_lines
        self.exact_columns = exact_columns

    def _params(self):
        return LayoutParams(**self.get_params()).check()

    def fit(self, X, y=None):
        res = run_stages(check_instance(X), self._params())
        self.instance_ = res.instance
        self.trees_ = res.trees
        self.paths_ = res.paths
        self.path_schedule_ = res.path_schedule
        self.schedule_ = res.schedule
        self.layout_ = res.layout
        self.metrics_ = res.metrics
        return self

    def transform(self, X=None):
        """Layout of the fitted instance; refits when given a new one."""
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "layout_")
        return self.layout_

    def fit_transform(self, X, y=None):
        return self.fit(X).layout_

    def score(self, X=None, y=None):
        """Negative line crossings, so that larger is better."""
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "metrics_")
        return -self.metrics_.line_crossings

    def to_svg(self, options=None):
        check_is_fitted(self, "layout_")
        return render_svg(self.layout_, self.instance_, options or RenderOptions())
