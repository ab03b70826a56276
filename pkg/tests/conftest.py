import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def one_to_hundred():
    """Losses 1..100: every quantile and tail integral is hand-checkable."""
    from slidevar import EmpiricalDistribution

    return EmpiricalDistribution(np.arange(1.0, 101.0))


def write_price_csv(path, prices, start="2024-01-01"):
    """A minimal date,price CSV with consecutive dates."""
    day = np.datetime64(start)
    lines = ["date,price"]
    for i, price in enumerate(prices):
        lines.append(f"{day + i},{float(price)!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
