"""Input coercion for the estimator front end."""
import json
import os
from pathlib import Path

from ..ingest import parse_instance
from ..model import StorylineInstance, validate_instance


def check_instance(X):
    """Return a validated :class:`StorylineInstance` from ``X``.

    ``X`` may already be an instance, a parsed instance document (dict),
    JSON text, or a path to an instance file.
    """
    if isinstance(X, StorylineInstance):
        return validate_instance(X)
    if isinstance(X, dict):
        return parse_instance(json.dumps(X))
    if isinstance(X, os.PathLike):
        return parse_instance(Path(X).read_text(encoding="utf-8"))
    if isinstance(X, str):
        if X.lstrip().startswith("{"):
            return parse_instance(X)
        return parse_instance(Path(X).read_text(encoding="utf-8"))
    raise TypeError(f"expected a StorylineInstance, dict, JSON text or path; got {type(X).__name__}")
