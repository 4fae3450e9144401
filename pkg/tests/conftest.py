import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from fishercap import channels as ch  # noqa: E402


@pytest.fixture
def awgn_unit():
    return ch.awgn_channel(1.0)


@pytest.fixture
def onebit_unit():
    return ch.quantized_awgn_channel(1.0, [0.0])


def finite_fd_fisher(channel, theta, h=1e-5):
    """Brute-force Fisher of a finite-output channel by central differences."""
    p = np.asarray(channel.output_pmf(theta), dtype=float)
    p_hi = np.asarray(channel.output_pmf(theta + h), dtype=float)
    p_lo = np.asarray(channel.output_pmf(theta - h), dtype=float)
    dp = (p_hi - p_lo) / (2.0 * h)
    mask = p > 1e-300
    return float((dp[mask] ** 2 / p[mask]).sum())
