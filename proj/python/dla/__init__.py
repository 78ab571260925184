"""Dataset license compliance analysis.

Thin wrapper over the native core: documents go in and come out as plain
Python dicts.
"""

import json
import os
from pathlib import Path

from ._dla import ENGINE_VERSION, DlaError
from . import _dla

__all__ = [
    "ENGINE_VERSION",
    "DlaError",
    "analysis_key",
    "assess",
    "license_ranges",
    "lookup_template",
    "run_cli",
    "templates_dir",
    "validate_provenance",
    "validate_rights_vector",
    "verify",
]


def templates_dir():
    """Template directory: $DLA_TEMPLATES, else the copy shipped with the package."""
    env = os.environ.get("DLA_TEMPLATES")
    if env:
        return Path(env)
    return Path(__file__).parent / "data" / "templates"


def _templates(templates):
    return str(templates if templates is not None else templates_dir())


def run_cli(*args):
    """Run the dla command line; returns (status, stdout, stderr)."""
    args = [str(a) for a in args]
    if "--templates" not in args:
        args = ["--templates", _templates(None)] + args
    return _dla.run_cli(args)


def validate_provenance(record, lenient=False):
    return json.loads(_dla.validate_provenance(json.dumps(record), lenient))


def validate_rights_vector(vector, lenient=False):
    return json.loads(_dla.validate_rights_vector(json.dumps(vector), lenient))


def license_ranges(bundle, lenient=False):
    """Map of subject id -> (start_year, end_year)."""
    ranges = json.loads(_dla.license_ranges(str(bundle), lenient))
    return {k: (v["start_year"], v["end_year"]) for k, v in ranges.items()}


def lookup_template(license_id, version="", templates=None):
    return json.loads(_dla.lookup_template(_templates(templates), license_id, version))


def verify(bundle, templates=None, unknown_denies=False, lenient=False):
    return json.loads(_dla.verify(str(bundle), _templates(templates), unknown_denies, lenient))


def assess(bundles, scenarios=None, templates=None, unknown_denies=False, lenient=False):
    if isinstance(bundles, (str, os.PathLike)):
        bundles = [bundles]
    scenarios_json = json.dumps(scenarios) if scenarios is not None else ""
    return json.loads(_dla.assess([str(b) for b in bundles], _templates(templates), scenarios_json,
                                  unknown_denies, lenient))


def analysis_key(record, unknown_denies=False):
    return _dla.analysis_key(json.dumps(record), unknown_denies)
