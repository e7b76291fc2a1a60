"""Network model, neuron sensitivities and coreset pruning."""
from __future__ import annotations

import json
import logging

import numpy as np
import pytest

from coreprune.artifacts import report_from_json, report_to_json
from coreprune.coresets import onion_sensitivities
from coreprune.errors import DimensionMismatch, InvalidParameter, InvalidSampleSize, NoConvergence
from coreprune.pruning import (
    LayerSpec,
    NetworkSpec,
    PruneReport,
    budgets_for_ratio,
    forward,
    forward_trace,
    layer_output_error,
    neuron_sensitivities,
    parameter_count,
    prune_layer,
    prune_layer_to_width,
    prune_network,
    pruned_parameter_count,
    pruning_ratio,
)

LENET = [784, 300, 100, 10]


# =============================================================================
# NETWORK MODEL
# =============================================================================

def test_parameter_count_of_lenet(random_network):
    net = random_network(LENET)
    assert parameter_count(net) == 266_610
    assert net.widths == LENET


def test_layers_must_chain():
    with pytest.raises(DimensionMismatch):
        NetworkSpec.of([LayerSpec(np.ones((3, 2)), np.zeros(3)), LayerSpec(np.ones((1, 4)), np.zeros(1))])
    with pytest.raises(DimensionMismatch):
        LayerSpec(np.ones((3, 2)), np.zeros(2))
    with pytest.raises(InvalidParameter):
        LayerSpec(np.ones((3, 2)), np.zeros(3), "sigmoid")


def test_forward_trace_matches_forward(rng, random_network):
    net = random_network([6, 5, 4, 2], seed=1)
    X = rng.standard_normal((7, 6))
    trace = forward_trace(net, X)
    assert [Z.shape for Z in trace] == [(7, 5), (7, 4), (7, 2)]
    np.testing.assert_allclose(trace[-1], forward(net, X))


def test_forward_rejects_wrong_width(random_network):
    with pytest.raises(DimensionMismatch):
        forward(random_network([6, 5, 2]), np.zeros((1, 5)))


def test_budgets_for_ninety_percent(random_network):
    net = random_network(LENET)
    budgets = budgets_for_ratio(net, 90.0)
    assert len(budgets) == 2
    ratio = pruning_ratio(parameter_count(net), pruned_parameter_count(net, budgets))
    assert abs(ratio - 90.0) <= 0.5


def test_pruning_ratio_arithmetic():
    assert pruning_ratio(200, 50) == 75.0
    with pytest.raises(InvalidParameter):
        pruning_ratio(0, 0)
    with pytest.raises(InvalidParameter):
        budgets_for_ratio(NetworkSpec.of([LayerSpec(np.ones((2, 2)), np.zeros(2))]), 100.0)


# =============================================================================
# NEURON SENSITIVITIES
# =============================================================================

def test_single_unit_next_layer_matches_plain_peeling(rng):
    layer = LayerSpec(rng.standard_normal((60, 3)), rng.standard_normal(60))
    next_layer = LayerSpec(np.ones((1, 60)), np.zeros(1), "linear")
    sens = neuron_sensitivities(layer, next_layer)
    np.testing.assert_array_equal(sens.s, onion_sensitivities(layer.neuron_points()).s)


def test_duplicate_next_neurons_do_not_change_scores(rng):
    layer = LayerSpec(rng.standard_normal((50, 3)), rng.standard_normal(50))
    w = rng.standard_normal(50)
    once = neuron_sensitivities(layer, LayerSpec(w[None, :], np.zeros(1), "linear"))
    twice = neuron_sensitivities(layer, LayerSpec(np.vstack([w, w]), np.zeros(2), "linear"))
    np.testing.assert_array_equal(once.s, twice.s)


@pytest.mark.slow
def test_sensitivity_order_ignores_next_layer_scale(random_network):
    net = random_network(LENET[:3], seed=5)
    layer, next_layer = net.layers
    sens = neuron_sensitivities(layer, next_layer)
    scaled = LayerSpec(3.0 * next_layer.W, next_layer.b, next_layer.activation)
    rescored = neuron_sensitivities(layer, scaled)
    assert np.all(sens.s > 0)
    np.testing.assert_array_equal(np.argsort(sens.s, kind="stable"), np.argsort(rescored.s, kind="stable"))


def test_reduced_neuron_points(random_network):
    net = random_network([30, 20, 5], seed=2)
    sens = neuron_sensitivities(*net.layers, reduce_method="pca", reduce_dim=4)
    assert sens.n == 20
    assert np.all(sens.s > 0)
    with pytest.raises(InvalidParameter):
        neuron_sensitivities(*net.layers, reduce_method="pca")


# =============================================================================
# LAYER PRUNING
# =============================================================================

def test_pruned_pre_activation_uses_coreset_weights(rng, random_network):
    net = random_network([12, 40, 6], seed=4)
    layer, next_layer = net.layers
    pruned = prune_layer(layer, next_layer, 15, seed=3)

    masked = np.zeros_like(next_layer.W)
    masked[:, pruned.kept] = next_layer.W[:, pruned.kept] * pruned.u
    X = rng.standard_normal((20, 12))
    expected = layer(X) @ masked.T + next_layer.b
    np.testing.assert_allclose(pruned.next_layer.pre_activation(pruned.layer(X)), expected, atol=1e-12)
    assert pruned.layer.n_out == pruned.kept.size <= 15


def test_budget_above_width_keeps_everything(random_network, caplog):
    net = random_network([5, 8, 2], seed=0)
    with caplog.at_level(logging.WARNING, logger="coreprune.pruning.pruner"):
        pruned = prune_layer(*net.layers, 20)
    assert pruned.kept.tolist() == list(range(8))
    np.testing.assert_array_equal(pruned.u, np.ones(8))
    assert "exceeds layer width" in caplog.text


def test_budget_must_be_positive(random_network):
    with pytest.raises(InvalidSampleSize):
        prune_layer(*random_network([5, 8, 2]).layers, 0)


def test_layer_error_is_zero_without_pruning(rng, random_network):
    net = random_network([10, 8, 3], seed=9)
    pruned = prune_layer(*net.layers, 8)
    assert layer_output_error(*net.layers, pruned, rng.standard_normal((50, 10))) == (0.0, 0.0)


@pytest.mark.slow
def test_layer_error_shrinks_with_budget(random_network):
    net = random_network(LENET[:3], seed=6)
    layer, next_layer = net.layers
    sens = neuron_sensitivities(layer, next_layer)
    probes = np.random.default_rng(0).standard_normal((1000, 784))

    means = []
    for m in (25, 50, 100, 200):
        errors = [
            layer_output_error(layer, next_layer,
                               prune_layer(layer, next_layer, m, seed=seed, sensitivities=sens),
                               probes)[0]
            for seed in range(20)
        ]
        means.append(float(np.mean(errors)))
    assert all(later < earlier for earlier, later in zip(means, means[1:]))


# =============================================================================
# NETWORK PRUNING
# =============================================================================

def test_zero_compression_is_exact(rng, random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    pruned, report = prune_network(net, [12, 8], probe_inputs=50)
    X = rng.standard_normal((30, 20))
    assert np.max(np.abs(forward(pruned, X) - forward(net, X))) == 0.0
    assert report.pr_percent == 0.0
    assert all(layer.err_max == 0.0 for layer in report.layers)


def test_report_parameter_arithmetic(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    pruned, report = prune_network(net, [6, 4], seed=1, probe_inputs=50)
    kept = [layer.kept for layer in report.layers]
    assert pruned.widths == [20, *kept, 3]
    assert report.params_before == parameter_count(net)
    assert report.params_after == pruned_parameter_count(net, kept) == parameter_count(pruned)
    assert report.pr_percent == pruning_ratio(report.params_before, report.params_after)


def test_prune_network_is_seeded(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    _, first = prune_network(net, [6, 4], seed=11, probe_inputs=20)
    _, second = prune_network(net, [6, 4], seed=11, probe_inputs=20)
    assert first == second


def test_prune_network_needs_one_budget_per_hidden_layer(random_network):
    with pytest.raises(InvalidParameter):
        prune_network(random_network([20, 12, 8, 3]), [6])


def test_report_json_round_trip(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    _, report = prune_network(net, [6, 4], seed=2, probe_inputs=20)
    assert report_from_json(report_to_json(report)) == report
    assert PruneReport.from_dict(json.loads(report_to_json(report))).seed == 2


# =============================================================================
# EXACT WIDTHS
# =============================================================================

def test_prune_layer_to_width_keeps_exact_count(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    first, second = net.layers[0], net.layers[1]
    for width in (1, 4, 9, 11):
        pruned, draws = prune_layer_to_width(first, second, width, seed=3)
        assert pruned.kept.size == width
        assert pruned.layer.n_out == width
        assert pruned.next_layer.n_in == width
        assert draws >= width


def test_prune_layer_to_width_uses_fewest_draws(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    first, second = net.layers[0], net.layers[1]
    sens = neuron_sensitivities(first, second, seed=3)
    pruned, draws = prune_layer_to_width(first, second, 5, seed=3, sensitivities=sens)
    if draws < first.n_out:
        np.testing.assert_array_equal(
            prune_layer(first, second, draws, seed=3, sensitivities=sens).kept, pruned.kept
        )
    if 5 < draws <= first.n_out:
        shorter = prune_layer(first, second, draws - 1, seed=3, sensitivities=sens)
        assert shorter.kept.size < 5


def test_prune_layer_to_width_is_seeded(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    first, second = net.layers[0], net.layers[1]
    a, draws_a = prune_layer_to_width(first, second, 6, seed=4)
    b, draws_b = prune_layer_to_width(first, second, 6, seed=4)
    assert draws_a == draws_b
    np.testing.assert_array_equal(a.kept, b.kept)
    np.testing.assert_array_equal(a.u, b.u)


def test_prune_layer_to_full_width_is_exact(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    pruned, draws = prune_layer_to_width(net.layers[0], net.layers[1], 12)
    assert draws == 12
    np.testing.assert_array_equal(pruned.u, np.ones(12))


def test_prune_layer_to_width_draw_cap(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    with pytest.raises(NoConvergence):
        prune_layer_to_width(net.layers[0], net.layers[1], 11, seed=0, max_draws=11)
    with pytest.raises(InvalidSampleSize):
        prune_layer_to_width(net.layers[0], net.layers[1], 0)


def test_match_widths_meets_parameter_budget(random_network):
    net = random_network([20, 12, 8, 3], seed=8)
    pruned, report = prune_network(net, [5, 3], seed=2, probe_inputs=20, match_widths=True)
    assert pruned.widths == [20, 5, 3, 3]
    assert [layer.kept for layer in report.layers] == [5, 3]
    assert all(layer.draws >= layer.kept for layer in report.layers)
    assert report.pr_percent == pruning_ratio(parameter_count(net), pruned_parameter_count(net, [5, 3]))


@pytest.mark.slow
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_lenet_at_ninety_percent(random_network, seed):
    net = random_network(LENET, seed=0)
    budgets = budgets_for_ratio(net, 90.0)
    pruned, report = prune_network(net, budgets, seed=seed, probe_inputs=200, match_widths=True)
    assert abs(report.pr_percent - 90.0) <= 0.5
    assert pruned.widths == [784, *budgets, 10]
