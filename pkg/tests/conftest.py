import numpy as np
import pytest


def naive_window_variances(y, starts, s, order):
    """Loop-and-polyfit reference on raw integer abscissae."""
    out = []
    x = np.arange(s, dtype=float)
    for a in starts:
        seg = y[a : a + s]
        coef = np.polyfit(x, seg, order)
        out.append(np.mean((seg - np.polyval(coef, x)) ** 2))
    return np.array(out)


def naive_fq(var, q):
    var = np.asarray(var, dtype=float)
    if q == 0:
        return float(np.exp(np.sum(np.log(var)) / (2 * var.size)))
    return float(np.mean(var ** (q / 2.0)) ** (1.0 / q))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
