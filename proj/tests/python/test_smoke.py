import math

import pytest

import graphbandit as gb


def test_graph_and_classification():
    g = gb.directed_cycle(5)
    assert g.num_vertices == 5
    assert g.num_edges == 5
    obs = gb.classify(g)
    assert obs["graph"] == "weakly_observable"
    assert all(v == "weakly_observable" for v in obs["vertex"])

    mab = gb.mab(4)
    assert gb.classify(mab)["graph"] == "strongly_observable"

    round_trip = gb.FeedbackGraph.parse_json(g.to_json())
    assert round_trip.edges() == g.edges()


def test_packing_and_incidence():
    assert gb.greedy_packing_independent_set(gb.directed_cycle(6), 1) == [0, 2, 4]
    h = gb.incidence_graph(gb.clique_union([2, 2]), [[0, 1], [2, 3]])
    assert h.num_edges == 0


def test_lp_and_partition():
    delta, weights = gb.solve_block_lp(gb.loopless_clique(4), [0, 1, 2, 3])
    assert delta == pytest.approx(4.0 / 3.0, abs=1e-6)
    assert sum(weights) == pytest.approx(delta, abs=1e-9)

    p = gb.build_partition(gb.clique_union([3, 3]), "components")
    assert p["u2"] == [0, 1]
    assert p["delta_bar_star"] == pytest.approx(3.0, abs=1e-6)

    with pytest.raises(ValueError):
        gb.validate_partition(gb.directed_cycle(3), [[0], [1], [2]])

    hp = gb.hypercube_partition(3)
    assert sorted(hp["dominating_set"]) == [0, 1, 6, 7]


def test_mirror_step():
    out = gb.mirror_step_simplex([0.5, 0.5], [1.0, 0.0], "negative_entropy", 1.0, 1.0)
    expected = math.exp(-1.0) / (1.0 + math.exp(-1.0))
    assert out[0] == pytest.approx(expected, abs=1e-10)

    w = gb.unconstrained_step([0.25], [-0.25], "tsallis_half", 1.0)
    assert w[0] == pytest.approx(0.25 * 64.0 / 49.0, abs=1e-12)


def test_play_game_and_fit():
    g = gb.mab(3)
    cps = gb.play_game(g, "singletons", "well_clustered", horizon=512, seed=1,
                       adversary="stochastic_gap", gap=0.3, best_arm=0)
    assert cps[-1]["t"] == 512
    again = gb.play_game(g, "singletons", "well_clustered", horizon=512, seed=1,
                         adversary="stochastic_gap", gap=0.3, best_arm=0)
    assert cps[-1]["regret"] == again[-1]["regret"]

    fit = gb.fit_exponent([(1e3, 5 * 1e3 ** 0.5), (1e4, 5 * 1e4 ** 0.5), (1e5, 5 * 1e5 ** 0.5)])
    assert fit["defined"]
    assert fit["slope"] == pytest.approx(0.5, abs=1e-9)


def test_run_experiment_dict():
    config = {
        "family": "smoke",
        "graph": {"generator": "clique_union", "sizes": [3, 3]},
        "partition": {"method": "components"},
        "realization": {"mode": "well_clustered"},
        "adversary": {"kind": "stochastic_gap", "gap": 0.3, "best_arm": 0},
        "horizons": [64, 128],
        "seeds": [1, 2],
        "checkpoints": 4,
    }
    summary = gb.run_experiment(config)
    assert summary["family"] == "smoke"
    assert len(summary["per_horizon"]) == 2
    assert summary["per_horizon"][0]["constants"]["eta"] > 0

    bounds = gb.bound_report({
        "preset": "c-corrupted", "horizons": [1000000], "seeds": [1]})
    assert bounds["c-corrupted"]["1000000"]["corrupted-bound"] == pytest.approx(180000.0)
