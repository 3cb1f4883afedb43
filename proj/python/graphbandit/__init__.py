"""Two-level online stochastic mirror descent for bandits with graph feedback.

Thin Python layer over the C++ core. Graph construction, partition builders,
mirror steps and full experiment runs are exposed from ``graphbandit._core``;
this module adds dict-based wrappers around the JSON entry points.
"""

import json as _json

from ._core import (  # noqa: F401
    FeedbackGraph,
    GraphBanditConfigError,
    GraphBanditRunError,
    bipartite_union,
    bound_report_json,
    build_partition,
    classify,
    clique_union,
    corrupted_mab,
    directed_cycle,
    fit_exponent,
    greedy_packing_independent_set,
    hypercube,
    hypercube_partition,
    incidence_graph,
    loopless_clique,
    loopy_star,
    mab,
    mirror_step_simplex,
    play_game,
    run_experiment_json,
    solve_block_lp,
    unconstrained_step,
    undirected_cycle,
    validate_partition,
)


def run_experiment(config):
    """Run one experiment config (dict) and return the summary as a dict."""
    return _json.loads(run_experiment_json(_json.dumps(config)))


def bound_report(config):
    """Analytical regret bound values per family and horizon for a config dict."""
    return _json.loads(bound_report_json(_json.dumps(config)))
