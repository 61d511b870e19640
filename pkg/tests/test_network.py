import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snnedge.core import (
    ContractError,
    InhibitionSchedule,
    SpikeTrain,
    init_model,
    normalize_input_weights,
    poisson_encode,
    run_network,
    update_inhibition,
)
from snnedge.core.network import NetworkModel

from conftest import labelled_model


def reference_run(model, train):
    """Scalar re-implementation of the inference loop, used as an oracle."""
    ep, ip = model.exc_params, model.inh_params
    n, n_in = model.n_exc, model.input_size
    w_in = model.syn_input_exc.weights
    w_ei = model.syn_exc_inh.weights
    w_ie = model.syn_inh_exc.weights

    def neuron(p):
        return {"v": [p.v_rest] * n, "ref": [0.0] * n}

    ex, ih = neuron(ep), neuron(ip)
    prev_e, prev_i = [False] * n, [False] * n
    counts = [0] * n

    def step(st_, p, jumps):
        a = math.exp(-p.dt / p.tau_rc)
        out = [False] * n
        for j in range(n):
            if st_["ref"][j] > 0:
                st_["ref"][j] = max(0.0, st_["ref"][j] - p.dt)
                st_["v"][j] = p.v_reset
                continue
            current = jumps[j] / (p.resistance * (1 - a))
            v = p.v_rest + (st_["v"][j] - p.v_rest) * a + p.resistance * current * (1 - a)
            if v >= p.v_thresh_base:
                out[j] = True
                v = p.v_reset
                st_["ref"][j] = p.tau_refrac
            st_["v"][j] = v
        return out

    for t in range(train.steps):
        jumps_e = [0.0] * n
        for j in range(n):
            jumps_e[j] = sum(w_in[i, j] for i in range(n_in) if train.data[t, i])
            jumps_e[j] += sum(w_ie[k, j] for k in range(n) if prev_i[k])
        jumps_i = [sum(w_ei[k, j] for k in range(n) if prev_e[k]) for j in range(n)]
        se = step(ex, ep, jumps_e)
        si = step(ih, ip, jumps_i)
        for j in range(n):
            counts[j] += se[j]
        prev_e, prev_i = se, si
    return np.array(counts)


def test_zero_input_gives_zero_output(tiny_model):
    rec = run_network(tiny_model, poisson_encode(np.zeros(784), seed=0))
    assert rec.total_output_spikes == 0
    assert rec.no_activity


def test_matches_scalar_reference_loop():
    model = init_model(n_exc=6, seed=4, input_size=20)
    normalize_input_weights(model, 8.0)
    update_inhibition(model, 12_000)
    rng = np.random.default_rng(9)
    train = SpikeTrain((rng.random((80, 20)) < 0.3).astype(np.uint8), 1.0)
    rec = run_network(model, train)
    expected = reference_run(model, train)
    assert rec.total_output_spikes > 0
    assert np.array_equal(rec.exc_spike_counts, expected)


def test_counts_equal_raster_sum(tiny_model):
    img = np.random.default_rng(2).integers(0, 256, 784)
    rec, raster = run_network(tiny_model, poisson_encode(img, seed=1), record_steps=True)
    assert raster.shape == (100, tiny_model.n_exc)
    assert np.array_equal(raster.sum(axis=0), rec.exc_spike_counts)
    assert rec.total_output_spikes == int(raster.sum())


def test_inference_is_deterministic_and_pure(tiny_model):
    img = np.random.default_rng(3).integers(0, 256, 784)
    w_before = tiny_model.syn_input_exc.weights.copy()
    a = run_network(tiny_model, poisson_encode(img, seed=7))
    b = run_network(tiny_model, poisson_encode(img, seed=7))
    assert np.array_equal(a.exc_spike_counts, b.exc_spike_counts)
    assert a.pred_proportion == b.pred_proportion
    assert np.array_equal(tiny_model.syn_input_exc.weights, w_before)


def test_learning_changes_weights_within_bounds():
    model = init_model(n_exc=10, seed=0)
    normalize_input_weights(model)
    img = np.zeros(784)
    img[300:400] = 255
    before = model.syn_input_exc.weights.copy()
    run_network(model, poisson_encode(img, intensity=128, seed=0), learning=True)
    w = model.syn_input_exc.weights
    assert not np.array_equal(w, before)
    assert w.min() >= 0 and w.max() <= 1


def test_unlabelled_model_reports_unassigned():
    model = init_model(n_exc=5, seed=0)
    rec = run_network(model, poisson_encode(np.zeros(784), seed=0))
    assert rec.pred_all_activity == -1


def test_wrong_train_width_rejected(tiny_model):
    with pytest.raises(ContractError):
        run_network(tiny_model, SpikeTrain(np.zeros((10, 100), np.uint8), 1.0))


class TestNormalization:
    def test_halves_a_column_summing_to_double(self):
        model = init_model(n_exc=1, seed=0)
        model.syn_input_exc.weights[:] = 0.2  # 784 * 0.2 = 156.8
        normalize_input_weights(model, 78.4)
        np.testing.assert_allclose(model.syn_input_exc.weights, 0.1)

    def test_idempotent(self):
        model = init_model(n_exc=30, seed=1)
        normalize_input_weights(model)
        once = model.syn_input_exc.weights.copy()
        normalize_input_weights(model)
        np.testing.assert_allclose(model.syn_input_exc.weights, once, rtol=1e-12)

    def test_zero_column_left_alone(self):
        model = init_model(n_exc=3, seed=0)
        model.syn_input_exc.weights[:, 1] = 0
        normalize_input_weights(model)
        assert model.syn_input_exc.weights[:, 1].sum() == 0
        assert model.syn_input_exc.weights[:, 0].sum() == pytest.approx(78.4)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(1.0, 200.0))
    def test_column_sums_hit_target(self, seed, target):
        model = init_model(n_exc=8, seed=seed)
        rng = np.random.default_rng(seed)
        # Sparse columns force some entries past the cap before water filling.
        mask = rng.random(model.syn_input_exc.weights.shape) < rng.uniform(0.3, 1.0)
        model.syn_input_exc.weights *= mask
        normalize_input_weights(model, target)
        w = model.syn_input_exc.weights
        sums = w.sum(axis=0)
        feasible = (w > 0).sum(axis=0) >= target  # column can reach target under a cap of 1
        np.testing.assert_allclose(sums[feasible], target, rtol=0, atol=1e-6)
        assert w.min() >= 0 and w.max() <= 1


class TestInhibition:
    @pytest.mark.parametrize(
        "samples,expected",
        [(0, 10.0), (499, 10.0), (500, 10.25), (1000, 10.5), (10_000, 15.0), (60_000, 40.0)],
    )
    def test_ramp(self, samples, expected):
        assert InhibitionSchedule().magnitude(samples) == pytest.approx(expected)

    def test_weights_follow_schedule_with_zero_diagonal(self):
        model = init_model(n_exc=5, seed=0)
        assert model.inhibition_magnitude == 10.0
        update_inhibition(model, 60_000)
        w = model.syn_inh_exc.weights
        assert np.all(np.diag(w) == 0)
        off = w[~np.eye(5, dtype=bool)]
        assert np.all(off == -40.0)

    def test_positive_inhibitory_weight_rejected(self):
        model = labelled_model(n_exc=3)
        bad = model.syn_inh_exc.copy()
        bad.weights[0, 1] = 1.0
        with pytest.raises(ContractError):
            NetworkModel(
                model.syn_input_exc, model.syn_exc_inh, bad,
                model.exc_params, model.inh_params, model.exc_state, model.inh_state,
            )
