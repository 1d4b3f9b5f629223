"""Exact and numeric checks for the associativity (WDVV) equations."""

import json
import os
from fractions import Fraction
from pathlib import Path

from . import _core
from ._core import (
    BranchError,
    FixtureError,
    determining,
    diff,
    dubrovin_residual,
    ferapontov_residual,
    is_zero,
    normalize,
    suite_names,
)

__version__ = _core.__version__

_PACKAGED = Path(__file__).with_name("fixtures")


def fixtures_dir():
    """WDVV_FIXTURES if set, else the copy shipped in the wheel, else the build tree."""
    if os.environ.get("WDVV_FIXTURES"):
        return os.environ["WDVV_FIXTURES"]
    if _PACKAGED.is_dir():
        return str(_PACKAGED)
    return _core.default_fixtures_dir()


def evaluate(text, point, digits=50):
    """Numeric value at a point; coordinates may be ints, Fractions or floats (taken exactly)."""
    exact = {k: str(Fraction(v)) for k, v in point.items()}
    return _core.evaluate(text, exact, digits)


def run_suite(suite="all", *, fixtures=None, seed=20240501, digits=50, jobs=1, filter=""):
    """Run a suite and return the report as a dict (same schema as the CLI JSON)."""
    raw = _core.run_suite_json(suite, fixtures or fixtures_dir(), seed, digits, jobs, filter)
    return json.loads(raw)


def failures(report):
    return [c for c in report["checks"] if c["status"] == "fail"]


__all__ = [
    "BranchError",
    "FixtureError",
    "determining",
    "diff",
    "dubrovin_residual",
    "evaluate",
    "failures",
    "ferapontov_residual",
    "fixtures_dir",
    "is_zero",
    "normalize",
    "run_suite",
    "suite_names",
]
