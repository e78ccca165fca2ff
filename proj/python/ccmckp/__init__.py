"""Chance-constrained multiple-choice knapsack: instances, evaluation, NHILS search and metrics."""

import json as _json

from ._core import (
    Instance,
    compare_evaluators,
    estimate_cl_fixed,
    estimate_cl_staged,
    generate_app,
    generate_lab,
    hypervolume,
    igd,
    igd_plus,
    min_sample_size,
    nondominated_filter,
    order_error_bound,
    run_plan,
)
from ._core import run_nhils as _run_nhils


def run_nhils(instance, variant="Full", seed=0, **settings):
    """Run one variant; keyword settings use the plan-file names (population_size=40, ...)."""
    doc = _run_nhils(instance, variant, seed, {k: str(v) for k, v in settings.items()})
    return _json.loads(doc)


__all__ = [
    "Instance",
    "compare_evaluators",
    "estimate_cl_fixed",
    "estimate_cl_staged",
    "generate_app",
    "generate_lab",
    "hypervolume",
    "igd",
    "igd_plus",
    "min_sample_size",
    "nondominated_filter",
    "order_error_bound",
    "run_nhils",
    "run_plan",
]
