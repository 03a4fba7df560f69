"""Polynomial detrending, window variances and q-th order fluctuation functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import Profile, TimeSeries, profile as make_profile
from .errors import (
    EmptyWindowsError,
    MultifractalError,
    WindowTooShortError,
    ZeroVarianceWithNegativeQError,
)
from .segmentation import Method, SegmentationPlan, Window, make_plan

MAX_ORDER = 5

# A window variance below (ZERO_RTOL * rms of the centred window)**2 is pure
# rounding noise from fitting data the polynomial reproduces exactly.
ZERO_RTOL = 1e-12


@dataclass(frozen=True)
class DetrendConfig:
    order: int = 1

    def __post_init__(self):
        if not isinstance(self.order, (int, np.integer)) or not 1 <= self.order <= MAX_ORDER:
            raise MultifractalError(f"detrend order must be an integer in [1, {MAX_ORDER}], got {self.order!r}")


@dataclass(frozen=True, eq=False)
class FluctuationSurface:
    """``values[i, j]`` is F_q(s) for ``q_grid[i]`` and ``scales[j]``.

    Entries that diverge (a zero window variance met by q <= 0, or an all-zero
    scale) are NaN in ``values`` and True in ``flagged``.
    """

    q_grid: np.ndarray
    scales: np.ndarray
    values: np.ndarray
    flagged: np.ndarray
    method: Method
    order: int = 1
    overlap_frac: float | None = None
    window_counts: np.ndarray = field(default=None)

    @property
    def flagged_pairs(self) -> list[tuple[float, int]]:
        qi, si = np.nonzero(self.flagged)
        return [(float(self.q_grid[a]), int(self.scales[b])) for a, b in zip(qi, si)]

    def flagged_scales(self) -> np.ndarray:
        return self.scales[self.flagged.any(axis=0)]


@lru_cache(maxsize=256)
def _basis(length: int, order: int) -> np.ndarray:
    # Orthonormal basis of degree-<=order polynomials sampled on [-1, 1].
    # Legendre columns + QR keeps the fit well conditioned for long windows.
    t = np.linspace(-1.0, 1.0, length)
    q, _ = np.linalg.qr(np.polynomial.legendre.legvander(t, order))
    q.setflags(write=False)
    return q


def _residual_variances(segments: np.ndarray, order: int) -> np.ndarray:
    """Mean squared residual of the least-squares fit, one per row."""
    s = segments.shape[1]
    if s < order + 2:
        raise WindowTooShortError(f"window length {s} < order + 2 = {order + 2}")
    centred = segments - segments.mean(axis=1, keepdims=True)
    basis = _basis(s, order)
    resid = centred - (centred @ basis) @ basis.T
    var = np.mean(resid * resid, axis=1)
    floor = ZERO_RTOL**2 * np.mean(centred * centred, axis=1)
    var[var <= floor] = 0.0
    return var


def _profile_values(prof) -> np.ndarray:
    if isinstance(prof, Profile):
        return prof.values
    if isinstance(prof, TimeSeries):
        raise TypeError("expected a Profile; call profile() on the series first")
    return np.asarray(prof, dtype=float)


def window_variance(prof, window: Window, cfg: DetrendConfig = DetrendConfig()) -> float:
    """F^2 of a single window: mean squared residual after a degree-m fit."""
    y = _profile_values(prof)
    if window.start < 0 or window.stop > y.size:
        raise IndexError(f"window [{window.start}, {window.stop}) outside profile of length {y.size}")
    seg = y[window.start : window.stop][None, :]
    return float(_residual_variances(seg, cfg.order)[0])


def window_variances(prof, plan: SegmentationPlan, cfg: DetrendConfig = DetrendConfig()) -> np.ndarray:
    y = _profile_values(prof)
    if plan.n_total != y.size:
        raise MultifractalError(f"plan built for N = {plan.n_total}, profile has {y.size} samples")
    idx = plan.starts[:, None] + np.arange(plan.scale)[None, :]
    return _residual_variances(y[idx], cfg.order)


def _log_fq(log_var: np.ndarray, q_grid: np.ndarray) -> np.ndarray:
    # log F_q = (1/q) * log(mean(exp((q/2) * log F^2))), evaluated as a
    # log-sum-exp so |q| = 20 neither overflows nor underflows.
    n = log_var.size
    out = np.empty(q_grid.size)
    for i, q in enumerate(q_grid):
        if q == 0.0:
            out[i] = 0.5 * np.mean(log_var)
            continue
        a = 0.5 * q * log_var
        top = np.max(a)
        if np.isinf(top):
            # all-zero variances (q > 0) or a zero variance at q < 0: F_q -> 0
            out[i] = -np.inf
            continue
        out[i] = (top + np.log(np.sum(np.exp(a - top))) - np.log(n)) / q
    return out


def fq(variances, q: float) -> float:
    """Generalised power mean of the window fluctuations F = sqrt(F^2).

    For ``q != 0``: ``(mean(F2 ** (q/2))) ** (1/q)``; for ``q == 0`` the
    geometric mean ``exp(mean(ln F2) / 2)``.
    """
    v = np.asarray(variances, dtype=float).reshape(-1)
    if v.size == 0:
        raise EmptyWindowsError("no window variances supplied")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise MultifractalError("window variances must be finite and non-negative")
    if q <= 0 and np.any(v == 0.0):
        raise ZeroVarianceWithNegativeQError(
            f"{int(np.sum(v == 0.0))} zero-variance window(s) make the q = {q} moment diverge"
        )
    with np.errstate(divide="ignore"):
        log_v = np.log(v)
    return float(np.exp(_log_fq(log_v, np.array([float(q)]))[0]))


def _as_grid(values, dtype, name) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype).reshape(-1)
    if arr.size == 0:
        raise MultifractalError(f"{name} is empty")
    if np.any(np.diff(arr) <= 0):
        raise MultifractalError(f"{name} must be strictly increasing")
    return arr


def fluctuation_surface(
    prof,
    method,
    q_grid,
    scales,
    overlap_frac: float = 0.25,
    cfg: DetrendConfig = DetrendConfig(),
) -> FluctuationSurface:
    """F_q(s) over a q grid and a scale grid for one segmentation method.

    Divergent entries are flagged rather than raised, so one pathological
    scale does not abort the whole analysis.
    """
    method = Method(method)
    q = _as_grid(q_grid, float, "q_grid")
    s_grid = _as_grid(scales, np.int64, "scales")
    y = _profile_values(prof)
    values = np.empty((q.size, s_grid.size))
    flagged = np.zeros((q.size, s_grid.size), dtype=bool)
    counts = np.empty(s_grid.size, dtype=np.int64)
    for j, s in enumerate(s_grid):
        plan = make_plan(method, y.size, int(s), cfg.order, overlap_frac)
        var = window_variances(y, plan, cfg)
        counts[j] = var.size
        with np.errstate(divide="ignore"):
            log_f = _log_fq(np.log(var), q)
        has_zero = bool(np.any(var == 0.0))
        bad = ~np.isfinite(log_f)
        if has_zero:
            bad |= q <= 0
        flagged[:, j] = bad
        values[:, j] = np.where(bad, np.nan, np.exp(log_f))
    values.setflags(write=False)
    flagged.setflags(write=False)
    return FluctuationSurface(
        q_grid=q,
        scales=s_grid,
        values=values,
        flagged=flagged,
        method=method,
        order=cfg.order,
        overlap_frac=overlap_frac if method is Method.BIOSW else None,
        window_counts=counts,
    )


def surface_for_series(series, method, q_grid, scales, overlap_frac=0.25, order=1) -> FluctuationSurface:
    """Profile the series and compute its fluctuation surface."""
    return fluctuation_surface(make_profile(series), method, q_grid, scales, overlap_frac, DetrendConfig(order))
