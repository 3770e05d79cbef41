import numpy as np
import pytest

from feemarket import discount_stats, make_bid_vector, sample
from feemarket.distributions import (
    ValueDistribution,
    ValuePool,
    load_bitcoin_values,
    load_value_pool,
    synthetic_data_path,
    transform_uniform,
)
from feemarket.errors import EmptyPool, MalformedRow

ALL_SYNTHETIC = [
    ValueDistribution.discrete_uniform(),
    ValueDistribution.uniform01(),
    ValueDistribution.half_normal(),
    ValueDistribution.inverse(),
]


def test_determinism():
    for dist in ALL_SYNTHETIC:
        a = sample(dist, 1000, seed=42)
        b = sample(dist, 1000, seed=42)
        assert np.array_equal(a.values, b.values)
        c = sample(dist, 1000, seed=43)
        assert not np.array_equal(a.values, c.values)


@pytest.mark.parametrize("dist", ALL_SYNTHETIC, ids=lambda d: d.label)
def test_positivity_at_scale(dist):
    vals = sample(dist, 10**6, seed=1).values
    assert np.all(vals > 0)
    assert np.all(np.isfinite(vals))


def test_discrete_uniform_support():
    vals = sample(ValueDistribution.discrete_uniform(), 10**5, seed=2).values
    assert np.all(vals == np.round(vals))
    assert vals.min() >= 1 and vals.max() <= 100
    assert set(np.unique(vals)) == set(range(1, 101))  # all 100 atoms hit


def test_inverse_cdf_arithmetic():
    u = np.array([0.5])
    assert transform_uniform(ValueDistribution.inverse(), u)[0] == 2.0


def test_uniform_mean():
    vals = sample(ValueDistribution.uniform01(), 10**6, seed=3).values
    assert abs(vals.mean() - 0.5) < 0.002  # 4 sigma of the CLT bound is ~0.0012


def test_inverse_heavy_tail():
    vals = sample(ValueDistribution.inverse(), 10**6, seed=4).values
    for t in (2.0, 10.0, 100.0):
        p = 1.0 / t
        frac = float(np.mean(vals > t))
        se = np.sqrt(p * (1 - p) / vals.size)
        assert abs(frac - p) <= 5 * se


def test_half_normal_sigma_scales():
    a = sample(ValueDistribution.half_normal(1.0), 2000, seed=5).values
    b = sample(ValueDistribution.half_normal(2.0), 2000, seed=5).values
    assert np.allclose(b, 2.0 * a)


# --- data pools ------------------------------------------------------------

def _write_csv(path, rows):
    path.write_text("output_sum_satoshi\n" + "".join(f"{r}\n" for r in rows))


def test_load_transforms(tmp_path):
    f = tmp_path / "pool.csv"
    _write_csv(f, [10000])
    assert load_bitcoin_values(f, "sqrt") == [100.0]
    assert load_bitcoin_values(f, "identity") == [10000.0]
    _write_csv(f, [7])
    assert load_bitcoin_values(f, "log") == [np.log(7.0)]


def test_log_drops_small_rows(tmp_path):
    f = tmp_path / "pool.csv"
    _write_csv(f, [1, 5, 1])
    pool = load_value_pool(f, "log")
    assert pool.dropped_rows == 2
    assert pool.values.tolist() == [np.log(5.0)]
    with pytest.raises(EmptyPool):
        _write_csv(f, [1, 1])
        load_value_pool(f, "log")


def test_malformed_rows(tmp_path):
    f = tmp_path / "pool.csv"
    f.write_text("wrong_header\n1\n")
    with pytest.raises(MalformedRow):
        load_value_pool(f, "identity")
    f.write_text("output_sum_satoshi\nabc\n")
    with pytest.raises(MalformedRow) as err:
        load_value_pool(f, "identity")
    assert err.value.line_number == 2
    f.write_text("output_sum_satoshi\n5\n-3\n")
    with pytest.raises(MalformedRow) as err:
        load_value_pool(f, "identity")
    assert err.value.line_number == 3
    with pytest.raises(FileNotFoundError):
        load_value_pool(tmp_path / "missing.csv", "identity")


def test_bundled_pool_loads():
    for transform in ("log", "sqrt", "identity"):
        pool = load_value_pool(synthetic_data_path(), transform)
        assert pool.values.size > 4000
        assert np.all(pool.values > 0)
    dist = ValueDistribution.from_data(synthetic_data_path(), "identity")
    vals = sample(dist, 5000, seed=6).values
    assert np.all(vals > 0)


def test_pool_scaling_leaves_discounts_unchanged():
    base = ValueDistribution.from_data(synthetic_data_path(), "sqrt")
    doubled = ValueDistribution(
        "bitcoin_data",
        pool=ValuePool(base.pool.values * 2.0, base.pool.dropped_rows, "sqrt", "scaled"),
    )
    b0 = sample(base, 300, seed=8)
    b1 = sample(doubled, 300, seed=8)
    assert np.array_equal(b1.values, 2.0 * b0.values)
    s0 = discount_stats(b0, "multibid")
    s1 = discount_stats(b1, "multibid")
    assert s0.per_user == s1.per_user
    assert (s0.delta_avg, s0.delta_max) == (s1.delta_avg, s1.delta_max)
