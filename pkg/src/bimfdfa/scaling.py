"""Generalised Hurst exponents, tau(q) and the singularity spectrum."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FlaggedColumnInRangeError, GridTooSmallError, TooFewScalesError
from .fluctuation import FluctuationSurface

MIN_FIT_SCALES = 4

# Reporting grid of the classic gold/silver tables, densified near q = 0 and
# with +-10 added so the narrower multifractality range can be read off.
DEFAULT_Q_GRID = (
    -20.0, -16.0, -12.0, -10.0, -8.0, -6.0, -4.0, -3.0, -2.0, -1.0,
    0.0, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0,
)


@dataclass(frozen=True, eq=False)
class HurstSpectrum:
    q_grid: np.ndarray
    h: np.ndarray
    r2: np.ndarray
    scale_range: tuple[int, int]
    scales_used: np.ndarray = None

    def at(self, q: float) -> float:
        hit = np.flatnonzero(self.q_grid == q)
        if hit.size == 0:
            raise KeyError(f"q = {q} not on the grid")
        return float(self.h[hit[0]])

    @property
    def hurst(self) -> float:
        return self.at(2.0)

    def is_monotone_decreasing(self, tol: float = 0.0) -> bool:
        """Soft diagnostic; finite samples routinely violate it."""
        return bool(np.all(np.diff(self.h) <= tol))


@dataclass(frozen=True, eq=False)
class ScalingExponents:
    q_grid: np.ndarray
    tau: np.ndarray


@dataclass(frozen=True, eq=False)
class SingularitySpectrum:
    q_grid: np.ndarray
    alpha: np.ndarray
    f_alpha: np.ndarray
    width: float


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    xm = x - x.mean()
    ym = y - y.mean()
    sxx = float(xm @ xm)
    slope = float(xm @ ym) / sxx
    intercept = float(y.mean() - slope * x.mean())
    syy = float(ym @ ym)
    resid = ym - slope * xm
    r2 = 1.0 if syy == 0.0 else 1.0 - float(resid @ resid) / syy
    return slope, intercept, r2


def fit_hurst(surface: FluctuationSurface, scale_range=None, drop_flagged: bool = False) -> HurstSpectrum:
    """Slope of ln F_q(s) against ln s for every q.

    ``scale_range`` is an inclusive ``(s_min, s_max)`` window on the surface's
    scales; None uses all of them. A flagged scale inside the range raises
    unless ``drop_flagged`` is set, in which case that scale is excluded for
    every q.
    """
    scales = surface.scales
    if scale_range is None:
        lo, hi = int(scales.min()), int(scales.max())
    else:
        lo, hi = int(scale_range[0]), int(scale_range[1])
    in_range = (scales >= lo) & (scales <= hi)
    col_flagged = surface.flagged.any(axis=0)
    if np.any(in_range & col_flagged):
        if not drop_flagged:
            bad = [int(s) for s in scales[in_range & col_flagged]]
            raise FlaggedColumnInRangeError(f"flagged (divergent) scales inside fit range: {bad}")
        in_range &= ~col_flagged
    if int(in_range.sum()) < MIN_FIT_SCALES:
        raise TooFewScalesError(
            f"need >= {MIN_FIT_SCALES} usable scales in [{lo}, {hi}], have {int(in_range.sum())}"
        )
    log_s = np.log(scales[in_range].astype(float))
    log_f = np.log(surface.values[:, in_range])
    h = np.empty(surface.q_grid.size)
    r2 = np.empty(surface.q_grid.size)
    for i in range(surface.q_grid.size):
        h[i], _, r2[i] = _ols(log_s, log_f[i])
    return HurstSpectrum(
        q_grid=surface.q_grid.copy(),
        h=h,
        r2=r2,
        scale_range=(lo, hi),
        scales_used=scales[in_range].copy(),
    )


def delta_h(spec: HurstSpectrum, q_range=None) -> float:
    """``h(q_min) - h(q_max)``, optionally restricted to ``q_range = (lo, hi)``."""
    q, h = spec.q_grid, spec.h
    if q_range is not None:
        keep = (q >= q_range[0]) & (q <= q_range[1])
        q, h = q[keep], h[keep]
    if q.size < 2:
        raise GridTooSmallError("delta_h needs at least two q values")
    return float(h[np.argmin(q)] - h[np.argmax(q)])


def tau(spec: HurstSpectrum) -> ScalingExponents:
    return ScalingExponents(q_grid=spec.q_grid.copy(), tau=spec.q_grid * spec.h - 1.0)


def legendre(spec: HurstSpectrum) -> SingularitySpectrum:
    """Singularity spectrum from h(q).

    ``alpha = h + q h'`` and ``f = q^2 h' + 1``; ``h'`` uses central
    differences on the (possibly non-uniform) grid and one-sided differences
    at the two ends.
    """
    q, h = spec.q_grid, spec.h
    if q.size < 3:
        raise GridTooSmallError("the Legendre transform needs at least three q values")
    dh = np.empty_like(h)
    dh[1:-1] = (h[2:] - h[:-2]) / (q[2:] - q[:-2])
    dh[0] = (h[1] - h[0]) / (q[1] - q[0])
    dh[-1] = (h[-1] - h[-2]) / (q[-1] - q[-2])
    alpha = h + q * dh
    f_alpha = q * q * dh + 1.0
    return SingularitySpectrum(
        q_grid=q.copy(),
        alpha=alpha,
        f_alpha=f_alpha,
        width=float(alpha.max() - alpha.min()),
    )


def default_scales(n_total: int, order: int = 1, count: int = 15, s_max_cap: int = 500) -> np.ndarray:
    """Log-spaced integer scales from ``max(10, m+2)`` to ``min(N // 4, 500)``."""
    lo = max(10, order + 2)
    hi = min(n_total // 4, s_max_cap)
    return log_scales(lo, hi, count)


def log_scales(s_min: int, s_max: int, count: int) -> np.ndarray:
    if s_max < s_min:
        raise TooFewScalesError(f"empty scale range [{s_min}, {s_max}]")
    raw = np.geomspace(s_min, s_max, max(int(count), 1))
    return np.unique(np.rint(raw).astype(np.int64))
