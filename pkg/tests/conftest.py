import numpy as np
import pytest

from tvelast.series import Dataset, MonthDate, MonthlySeries


@pytest.fixture
def rng():
    return np.random.default_rng(20250809)


def make_series(values, start=MonthDate(2000, 1), name="s"):
    return MonthlySeries(start, tuple(float(v) for v in values), name=name)


def make_dataset(n_months=200, seed=42, start=MonthDate(1971, 1)):
    """Positive level series whose logs follow drifting random walks."""
    gen = np.random.default_rng(seed)
    zc = np.cumsum(gen.normal(0.004, 0.01, n_months))
    zm = np.cumsum(gen.normal(0.006, 0.02, n_months))
    return Dataset(
        MonthlySeries(start, tuple(float(v) for v in 100.0 * np.exp(zc)), "cpi"),
        MonthlySeries(start, tuple(float(v) for v in 50.0 * np.exp(zm)), "m2"),
    )


@pytest.fixture
def dataset():
    return make_dataset()
