"""Shared oracles and fixtures.

The Dawson oracle evaluates the alternating Maclaurin series
D(z) = sum (-1)^n 2^n z^(2n+1) / (2n+1)!! in mpmath with working
precision scaled to the cancellation (the terms grow like exp(z^2)
before converging), keeping it independent of the production
series/asymptotic split.
"""

import mpmath as mp
import numpy as np
import pytest


def dawson_oracle(z):
    """Extended-precision alternating-series evaluation of D(z)."""
    z = mp.mpf(z)
    if z == 0:
        return mp.mpf(0)
    # digits lost to cancellation ~ z^2 * log10(e)
    dps = 30 + int(0.5 * float(z * z))
    with mp.workdps(dps):
        total = mp.mpf(0)
        term = z  # 2^n z^(2n+1) / (2n+1)!!
        n = 0
        while True:
            total += term
            n += 1
            term = term * (-2) * z * z / (2 * n + 1)
            if abs(term) < mp.mpf(10) ** (-dps) * (abs(total) + 1):
                break
            # the terms peak near n = z^2 and decay slowly after; large
            # arguments legitimately need several z^2 worth of terms
            if n > 20000:
                raise RuntimeError("oracle series failed to converge")
        return +total


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)
