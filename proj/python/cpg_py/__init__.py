"""Cyber physical games: simulation, transition matrices and exact outcome rates."""

import json

from . import _cpg
from ._cpg import (
    ConfigMismatchError,
    Error,
    ParseError,
    ValidationError,
    build_matrix,
    fixture_matrix,
    most_likely_paths,
    version,
)

__all__ = [
    "ConfigMismatchError",
    "Error",
    "ParseError",
    "ValidationError",
    "build_matrix",
    "exact_rates",
    "fixture_matrix",
    "most_likely_paths",
    "payoffs",
    "run_adver",
    "run_collab",
    "version",
]


def exact_rates(modes, poll_cap=16, leaves=False):
    return json.loads(_cpg.exact_rates(modes, poll_cap, leaves))


def payoffs(modes, exclusive=False, whole_percent=False):
    return json.loads(_cpg.payoffs(modes, exclusive, whole_percent))


def run_collab(modes, iterations, seed, replication=0):
    return json.loads(_cpg.run_collab(modes, iterations, seed, replication))


def run_adver(modes, ticks, seed, probs=(0.25, 0.25, 0.5)):
    return json.loads(_cpg.run_adver(modes, ticks, seed, list(probs)))
