"""Greedy approximation, entropy numbers and sampling discretization."""

import json

from ._core import *  # noqa: F401,F403
from ._core import _run_json


def run(config):
    """Run an experiment from a config dict and return the report as a dict."""
    return json.loads(_run_json(json.dumps(config)))
