import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bimfdfa.errors import FlaggedColumnInRangeError, GridTooSmallError, TooFewScalesError
from bimfdfa.fluctuation import FluctuationSurface, surface_for_series
from bimfdfa.scaling import (
    DEFAULT_Q_GRID,
    HurstSpectrum,
    default_scales,
    delta_h,
    fit_hurst,
    legendre,
    log_scales,
    tau,
)
from bimfdfa.segmentation import Method

Q = np.array(DEFAULT_Q_GRID)
SCALES = np.array([10, 14, 20, 28, 40, 57, 80, 113, 160])


def synthetic_surface(fn, q=Q, scales=SCALES, flagged=None):
    vals = np.array([[fn(qq, s) for s in scales] for qq in q], dtype=float)
    fl = np.zeros(vals.shape, dtype=bool) if flagged is None else flagged
    return FluctuationSurface(q_grid=np.asarray(q, float), scales=scales, values=vals, flagged=fl, method=Method.MFDFA)


def spectrum(q, h):
    q = np.asarray(q, float)
    return HurstSpectrum(q_grid=q, h=np.asarray(h, float), r2=np.ones(q.size), scale_range=(10, 100))


def test_exact_power_law():
    sp = fit_hurst(synthetic_surface(lambda q, s: s**0.5))
    np.testing.assert_allclose(sp.h, 0.5, atol=1e-13)
    np.testing.assert_allclose(sp.r2, 1.0, atol=1e-12)
    assert sp.scale_range == (10, 160)


def test_intercept_absorbed():
    sp = fit_hurst(synthetic_surface(lambda q, s: 2.0 * s**0.7))
    np.testing.assert_allclose(sp.h, 0.7, atol=1e-13)


def test_q_dependent_exponents():
    sp = fit_hurst(synthetic_surface(lambda q, s: s ** (0.6 - 0.01 * q)))
    np.testing.assert_allclose(sp.h, 0.6 - 0.01 * Q, atol=1e-12)
    assert sp.is_monotone_decreasing()


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-6, 1e6), st.integers(0, 2**32 - 1))
def test_rescaling_leaves_h_unchanged(c, seed):
    noise = np.random.default_rng(seed).uniform(0.5, 2.0, (Q.size, SCALES.size))
    base = synthetic_surface(lambda q, s: s**0.5)
    a = FluctuationSurface(Q, SCALES, base.values * noise, base.flagged, Method.MFDFA)
    b = FluctuationSurface(Q, SCALES, base.values * noise * c, base.flagged, Method.MFDFA)
    np.testing.assert_allclose(fit_hurst(a).h, fit_hurst(b).h, rtol=0, atol=1e-12)


def test_scale_range_subset():
    # two regimes: slope 0.3 below 50, 0.8 above
    def f(q, s):
        return s**0.3 if s < 50 else 50**0.3 * (s / 50) ** 0.8

    surf = synthetic_surface(f)
    np.testing.assert_allclose(fit_hurst(surf, (10, 40)).h, 0.3, atol=1e-12)
    np.testing.assert_allclose(fit_hurst(surf, (57, 160)).h, 0.8, atol=1e-12)


def test_too_few_scales():
    with pytest.raises(TooFewScalesError):
        fit_hurst(synthetic_surface(lambda q, s: s**0.5), (10, 20))


def test_flagged_column_in_range():
    fl = np.zeros((Q.size, SCALES.size), dtype=bool)
    fl[:3, 0] = True
    surf = synthetic_surface(lambda q, s: s**0.5, flagged=fl)
    with pytest.raises(FlaggedColumnInRangeError):
        fit_hurst(surf)
    sp = fit_hurst(surf, drop_flagged=True)
    assert 10 not in sp.scales_used
    sp2 = fit_hurst(surf, (14, 160))
    np.testing.assert_allclose(sp2.h, 0.5, atol=1e-13)


def test_gaussian_h2_ensemble():
    # 20 seeds, N = 4096, q = 2, scales 16..256 log-spaced
    scales = log_scales(16, 256, 10)
    h2 = []
    for seed in range(20):
        x = np.random.default_rng(seed).standard_normal(4096)
        h2.append(fit_hurst(surface_for_series(x, "mfdfa", [-2.0, 2.0, 4.0], scales)).at(2.0))
    assert abs(np.mean(h2) - 0.5) < 0.05
    assert np.all(np.abs(np.array(h2) - 0.5) < 0.1)


def test_delta_h():
    assert delta_h(spectrum([-2, 0, 2], [0.5, 0.5, 0.5])) == 0.0
    sp = spectrum([-20, -10, 0, 10, 20], [0.9, 0.8, 0.6, 0.4, 0.3])
    assert delta_h(sp) == pytest.approx(0.6)
    assert delta_h(sp, (-10, 10)) == pytest.approx(0.4)
    with pytest.raises(GridTooSmallError):
        delta_h(spectrum([1.0], [0.5]))


def test_tau_identities():
    sp = spectrum(Q, np.full(Q.size, 0.62))
    t = tau(sp)
    np.testing.assert_allclose(t.tau, 0.62 * Q - 1, atol=1e-15)
    assert t.tau[list(Q).index(0.0)] == -1.0
    assert tau(spectrum([0.0, 2.0, 3.0], [0.7, 0.5, 0.4])).tau[1] == 0.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-2, 3), min_size=len(Q), max_size=len(Q)))
def test_tau_at_zero_is_minus_one(h):
    assert tau(spectrum(Q, h)).tau[list(Q).index(0.0)] == -1.0


def test_monofractal_collapse():
    sp = spectrum(Q, np.full(Q.size, 0.55))
    leg = legendre(sp)
    assert abs(delta_h(sp)) <= 1e-12
    np.testing.assert_allclose(leg.alpha, 0.55, atol=1e-12)
    np.testing.assert_allclose(leg.f_alpha, 1.0, atol=1e-12)
    assert leg.width <= 1e-12
    # linear tau: constant second difference on the uniform part of the grid
    t = tau(sp).tau
    slopes = np.diff(t) / np.diff(Q)
    np.testing.assert_allclose(slopes, 0.55, atol=1e-12)


def test_legendre_linear_h():
    a, b = 0.7, 0.02
    q = np.arange(-10.0, 11.0)
    leg = legendre(spectrum(q, a - b * q))
    np.testing.assert_allclose(leg.alpha, a - 2 * b * q, atol=1e-12)
    np.testing.assert_allclose(leg.f_alpha, 1 - b * q**2, atol=1e-12)
    assert leg.width == pytest.approx(4 * b * 10)


def test_legendre_nonuniform_grid_central_difference():
    h = 0.5 + 0.1 * np.tanh(-Q / 5)
    leg = legendre(spectrum(Q, h))
    i = list(Q).index(4.0)
    dh = (h[i + 1] - h[i - 1]) / (Q[i + 1] - Q[i - 1])
    assert leg.alpha[i] == pytest.approx(h[i] + Q[i] * dh, rel=1e-14)
    # one-sided at the ends
    dh0 = (h[1] - h[0]) / (Q[1] - Q[0])
    assert leg.f_alpha[0] == pytest.approx(Q[0] ** 2 * dh0 + 1, rel=1e-14)
    assert leg.width >= 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 2), min_size=len(Q), max_size=len(Q)))
def test_legendre_f_near_zero(h):
    leg = legendre(spectrum(Q, h))
    i = int(np.argmin(np.abs(Q)))
    dh = np.gradient(np.asarray(h), Q)  # any bound on |h'| suffices here
    assert abs(leg.f_alpha[i] - 1) <= Q[i] ** 2 * np.max(np.abs(dh)) + 1e-9


def test_legendre_grid_too_small():
    with pytest.raises(GridTooSmallError):
        legendre(spectrum([0.0, 1.0], [0.5, 0.5]))


def test_default_scales():
    s = default_scales(8192)
    assert s[0] == 10 and s[-1] == 500 and s.size >= 14
    assert np.all(np.diff(s) > 0)
    s = default_scales(400, order=3)
    assert s[0] == 10 and s[-1] == 100
    assert default_scales(4096, order=9)[0] == 11
