import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snnedge.core import ContractError, SynapseMatrix, stdp_update


def _syn(w, **kw):
    return SynapseMatrix(np.array(w, dtype=float), plastic=True, **kw)


def test_no_spikes_no_change():
    syn = _syn(np.full((3, 2), 0.5))
    before = syn.weights.copy()
    stdp_update(syn, np.zeros(3, bool), np.zeros(2, bool), np.ones(3), np.ones(2))
    assert np.array_equal(syn.weights, before)


def test_post_spike_potentiates_by_eta_post():
    syn = _syn([[0.5]])
    stdp_update(syn, np.array([False]), np.array([True]), np.array([1.0]), np.array([0.0]), 1e-4, 0.01)
    assert syn.weights[0, 0] == pytest.approx(0.51)


def test_pre_spike_depresses_by_post_trace():
    syn = _syn([[0.5, 0.5]])
    stdp_update(syn, np.array([True]), np.array([False, False]), np.zeros(1), np.array([1.0, 0.5]), 0.1, 0.0)
    np.testing.assert_allclose(syn.weights, [[0.4, 0.45]])


def test_potentiation_clamps_to_w_max():
    syn = _syn([[0.999]])
    stdp_update(syn, np.array([False]), np.array([True]), np.array([1.0]), np.array([0.0]), 0.0, 0.5)
    assert syn.weights[0, 0] == 1.0


def test_depression_clamps_to_w_min():
    syn = _syn([[0.001]])
    stdp_update(syn, np.array([True]), np.array([False]), np.zeros(1), np.ones(1), 0.5, 0.0)
    assert syn.weights[0, 0] == 0.0


def test_non_plastic_rejected():
    syn = SynapseMatrix(np.zeros((2, 2)), plastic=False)
    with pytest.raises(ContractError):
        stdp_update(syn, np.zeros(2, bool), np.zeros(2, bool), np.zeros(2), np.zeros(2))


def test_matches_dense_outer_product_oracle():
    rng = np.random.default_rng(0)
    w = rng.uniform(0.2, 0.8, (6, 4))
    pre_s = rng.random(6) < 0.5
    post_s = rng.random(4) < 0.5
    pre_x, post_x = rng.random(6), rng.random(4)
    syn = _syn(w.copy())
    stdp_update(syn, pre_s, post_s, pre_x, post_x, 0.01, 0.05)
    # Dense form of the same rule (depression first, then potentiation).
    expected = np.clip(w - 0.01 * np.outer(pre_s, post_x), 0, 1)
    expected = np.clip(expected + 0.05 * np.outer(pre_x, post_s), 0, 1)
    np.testing.assert_allclose(syn.weights, expected, rtol=0, atol=1e-15)


def test_weight_bounds_over_10000_random_updates():
    rng = np.random.default_rng(1)
    syn = _syn(rng.uniform(0, 1, (30, 10)))
    for _ in range(10_000):
        stdp_update(
            syn,
            rng.random(30) < 0.3,
            rng.random(10) < 0.3,
            rng.random(30),
            rng.random(10),
            eta_pre=rng.uniform(0, 0.2),
            eta_post=rng.uniform(0, 0.2),
        )
    assert syn.weights.min() >= syn.w_min
    assert syn.weights.max() <= syn.w_max


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 6),
    st.integers(1, 6),
    st.integers(0, 2**32 - 1),
    st.floats(0.0, 2.0),
    st.floats(0.0, 2.0),
)
def test_bounds_property(n_pre, n_post, seed, eta_pre, eta_post):
    rng = np.random.default_rng(seed)
    syn = _syn(rng.uniform(-0.5, 0.5, (n_pre, n_post)), w_min=-0.5, w_max=0.5)
    for _ in range(20):
        stdp_update(
            syn,
            rng.random(n_pre) < 0.5,
            rng.random(n_post) < 0.5,
            rng.random(n_pre),
            rng.random(n_post),
            eta_pre,
            eta_post,
        )
        assert syn.weights.min() >= -0.5 and syn.weights.max() <= 0.5
