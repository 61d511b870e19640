import numpy as np
import pytest

from snnedge.core import ContractError, poisson_encode


def test_zero_image_is_silent():
    train = poisson_encode(np.zeros(784), seed=3)
    assert train.steps == 100
    assert train.total_spikes == 0


def test_same_seed_same_train():
    img = np.random.default_rng(0).integers(0, 256, 784)
    a = poisson_encode(img, seed=11)
    b = poisson_encode(img, seed=11)
    assert np.array_equal(a.data, b.data)
    c = poisson_encode(img, seed=12)
    assert not np.array_equal(a.data, c.data)


def test_binary_entries_and_shape():
    img = np.full(784, 255)
    train = poisson_encode(img, intensity=64.0, window_ms=50, dt_ms=0.5, seed=0)
    assert train.data.shape == (100, 784)
    assert set(np.unique(train.data)) <= {0, 1}


def test_full_pixel_mean_count_over_10000_seeds():
    # Oracle: a rate of 64 Hz over 0.1 s gives 6.4 expected spikes.
    counts = np.array(
        [poisson_encode(np.full(1, 255), 64.0, 100, 1, seed=s).total_spikes for s in range(10_000)]
    )
    assert counts.mean() == pytest.approx(6.4, rel=0.02)


def test_rate_law_per_pixel():
    # Each of 784 pixels gets a different intensity; 10,000 trials pooled.
    pixels = np.linspace(0, 255, 784)
    rng = np.random.default_rng(5)
    totals = np.zeros(784)
    trials = 10_000
    for _ in range(trials):
        totals += poisson_encode(pixels, 64.0, 100, 1, rng).data.sum(axis=0)
    expected = pixels / 255 * 64.0 * 100 / 1000
    bright = pixels > 128
    np.testing.assert_allclose(totals[bright] / trials, expected[bright], rtol=0.02)
    assert totals[0] == 0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"image": -np.ones(784)},
        {"image": np.zeros(784), "intensity": 0.0},
        {"image": np.zeros(784), "window_ms": 100.5},
        {"image": np.full(784, 300)},
    ],
)
def test_contract_violations(kwargs):
    with pytest.raises(ContractError):
        poisson_encode(**kwargs)
