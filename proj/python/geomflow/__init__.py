from ._geomflow import (
    check_elliptic,
    check_geometric,
    eval_codim_euclidean,
    eval_operator,
    mean_curvature_of_distance,
    meridian_arc,
    run_scenario,
    scenario_names,
)

__all__ = [
    "check_elliptic",
    "check_geometric",
    "eval_codim_euclidean",
    "eval_operator",
    "mean_curvature_of_distance",
    "meridian_arc",
    "run_scenario",
    "scenario_names",
]
