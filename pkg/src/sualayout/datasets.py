"""Bundled example instances and publication records."""
from importlib import resources

from .ingest import parse_instance, parse_publications

FIXTURES = ("single", "overlap", "case_study_1", "case_study_2")
PUBLICATIONS = ("case_study_1_publications", "case_study_2_publications")


def fixture_text(name):
    return resources.files("sualayout.data").joinpath(f"{name}.json").read_text(encoding="utf-8")


def fixture_path(name):
    return resources.files("sualayout.data").joinpath(f"{name}.json")


def load_instance(name):
    return parse_instance(fixture_text(name))


def load_publications(name):
    return parse_publications(fixture_text(name))
