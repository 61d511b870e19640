import numpy as np
import pytest

from snnedge.core import init_model, poisson_encode, run_network
from snnedge.trainer import (
    Dataset,
    LabelCoverageError,
    TrainConfig,
    assign_neuron_labels,
    label_from_rates,
    train,
)

from conftest import synthetic_digits


def small_config(**kw):
    base = dict(n_exc=12, seed=3, window_ms=50)
    base.update(kw)
    return TrainConfig(**base)


@pytest.fixture(scope="module")
def digits():
    images, labels = synthetic_digits(n_per_class=4, seed=0)
    order = np.random.default_rng(0).permutation(len(labels))
    return Dataset(images[order], labels[order])


def test_zero_samples_returns_untrained_model(digits):
    model = train(digits, small_config(samples=0), progress=None)
    assert not model.labels_ready
    assert np.all(model.exc_state.theta == 0)
    np.testing.assert_allclose(model.syn_input_exc.weights.sum(axis=0), 78.4)


def test_columns_normalised_after_training(digits):
    model = train(digits, small_config(), progress=None)
    np.testing.assert_allclose(model.syn_input_exc.weights.sum(axis=0), 78.4, atol=1e-6)
    w = model.syn_input_exc.weights
    assert w.min() >= 0 and w.max() <= 1


def test_inhibition_after_1000_samples():
    images = np.zeros((1000, 784), np.uint8)
    ds = Dataset(images, np.zeros(1000, np.uint8))
    model = train(ds, TrainConfig(n_exc=2, window_ms=2), progress=None)
    assert model.inhibition_magnitude == pytest.approx(10.5)


def test_training_is_bit_reproducible(digits):
    a = train(digits, small_config(), progress=None)
    b = train(digits, small_config(), progress=None)
    assert np.array_equal(a.syn_input_exc.weights, b.syn_input_exc.weights)
    assert np.array_equal(a.exc_state.theta, b.exc_state.theta)
    c = train(digits, small_config(seed=4), progress=None)
    assert not np.array_equal(a.syn_input_exc.weights, c.syn_input_exc.weights)


def test_progress_events_are_emitted():
    events = []
    ds = Dataset(np.zeros((2000, 784), np.uint8), np.zeros(2000, np.uint8))
    train(ds, TrainConfig(n_exc=2, window_ms=1), progress=events.append)
    assert [e["samples"] for e in events] == [1000, 2000]
    assert events[-1]["event"] == "train_progress"


def test_reduced_profile():
    cfg = TrainConfig.reduced()
    assert (cfg.n_exc, cfg.samples, cfg.label_samples) == (100, 10_000, 10_000)
    assert TrainConfig.from_dict(cfg.to_dict()) == cfg


class TestLabelAssignment:
    def test_argmax_of_rates(self):
        rates = np.zeros((3, 10))
        rates[0, 4] = 2.0
        rates[1, [1, 6]] = 5.0  # tie goes to the lower class
        labels, assigned = label_from_rates(rates)
        assert labels.tolist() == [4, 1, 0]
        assert assigned.tolist() == [True, True, False]

    def test_matches_oracle_on_random_rates(self):
        rng = np.random.default_rng(0)
        rates = rng.random((50, 10))
        labels, _ = label_from_rates(rates)
        for i in range(50):
            assert labels[i] == max(range(10), key=lambda c: (rates[i, c], -c))

    def test_assignment_matches_independent_recount(self, digits):
        cfg = small_config()
        model = train(digits, cfg, progress=None)
        labels, assigned = assign_neuron_labels(model, digits, cfg)
        # Replay the same encodings and redo the per-class mean by hand.
        rng = np.random.default_rng(cfg.seed + 1)
        sums = np.zeros((cfg.n_exc, 10))
        for image, label in zip(digits.images, digits.labels):
            train_ = poisson_encode(image, cfg.intensity, cfg.window_ms, cfg.dt_ms, rng)
            sums[:, label] += run_network(model, train_).exc_spike_counts
        rates = sums / np.bincount(digits.labels, minlength=10)
        for i in range(cfg.n_exc):
            if rates[i].max() > 0:
                assert labels[i] == int(np.argmax(rates[i]))
            else:
                assert not assigned[i]

    def test_missing_class_raises(self, digits):
        keep = digits.labels != 7
        model = init_model(n_exc=4, seed=0)
        with pytest.raises(LabelCoverageError, match="7"):
            assign_neuron_labels(model, Dataset(digits.images[keep], digits.labels[keep]))

    def test_empty_subset_raises(self):
        model = init_model(n_exc=4, seed=0)
        empty = Dataset(np.zeros((0, 784), np.uint8), np.zeros(0, np.uint8))
        with pytest.raises(LabelCoverageError):
            assign_neuron_labels(model, empty)
