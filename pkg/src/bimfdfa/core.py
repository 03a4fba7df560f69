"""Time-series container, log returns, profile and descriptive statistics.

Indexing is 0-based throughout: ``Profile.values[i]`` is the cumulative sum of
the centred samples ``x[0] .. x[i]``, i.e. the 1-based ``Y(i + 1)`` of the
usual MF-DFA notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    NonFiniteValueError,
    NonPositivePriceError,
    TooShortError,
    ZeroVarianceError,
)

MIN_ANALYSIS_LENGTH = 4


class SeriesKind(str, Enum):
    PRICE = "price"
    RETURN = "return"
    GENERIC = "generic"


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """An ordered sequence of finite real samples.

    ``values`` is stored as a read-only float64 array. Missing or non-finite
    samples are rejected rather than imputed.
    """

    values: np.ndarray
    label: str = ""
    kind: SeriesKind = SeriesKind.GENERIC

    def __post_init__(self):
        arr = _frozen(self.values)
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise NonFiniteValueError(f"non-finite sample at index {bad}")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "kind", SeriesKind(self.kind))

    def __len__(self):
        return self.values.size

    def with_values(self, values, label=None, kind=None) -> "TimeSeries":
        return TimeSeries(
            values,
            label=self.label if label is None else label,
            kind=self.kind if kind is None else kind,
        )


@dataclass(frozen=True, eq=False)
class Profile:
    values: np.ndarray
    source_mean: float

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    min: float
    max: float
    skewness: float
    kurtosis: float  # raw moment ratio, normal -> 3

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "min": self.min,
            "max": self.max,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
        }


def as_series(data, label: str = "", kind=SeriesKind.GENERIC) -> TimeSeries:
    if isinstance(data, TimeSeries):
        return data
    return TimeSeries(data, label=label, kind=kind)


def _require_length(series: TimeSeries, minimum: int, what: str):
    if len(series) < minimum:
        raise TooShortError(f"{what} needs at least {minimum} samples, got {len(series)}")


def log_returns(prices) -> TimeSeries:
    """Logarithmic returns ``r[t] = ln I[t+1] - ln I[t]``.

    The output is one sample shorter than the input.
    """
    prices = as_series(prices, kind=SeriesKind.PRICE)
    _require_length(prices, 2, "log_returns")
    v = prices.values
    if np.any(v <= 0):
        bad = int(np.flatnonzero(v <= 0)[0])
        raise NonPositivePriceError(f"price at index {bad} is {v[bad]!r}; prices must be > 0")
    # log of the ratio rather than a difference of logs: no cancellation
    # between large log-levels, and rescaling all prices leaves the ratios
    # (hence the returns) unchanged up to the rounding of the products
    return TimeSeries(np.log(v[1:] / v[:-1]), label=prices.label, kind=SeriesKind.RETURN)


def profile(series) -> Profile:
    series = as_series(series)
    _require_length(series, MIN_ANALYSIS_LENGTH, "profile")
    mean = float(np.mean(series.values))
    y = np.cumsum(series.values - mean)
    y.setflags(write=False)
    return Profile(values=y, source_mean=mean)


def describe(series) -> DescriptiveStats:
    """Sample size, mean, extrema and moment-based skewness / kurtosis.

    Moments are population (biased) moments. Kurtosis is m4 / m2**2, so a
    Gaussian sample gives values near 3.
    """
    series = as_series(series)
    _require_length(series, MIN_ANALYSIS_LENGTH, "describe")
    x = series.values
    mean = float(np.mean(x))
    d = x - mean
    m2 = float(np.mean(d * d))
    if m2 == 0.0:
        raise ZeroVarianceError("skewness and kurtosis are undefined for a constant series")
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    return DescriptiveStats(
        n=int(x.size),
        # clamp guards the invariant min <= mean <= max against rounding
        mean=min(max(mean, float(x.min())), float(x.max())),
        min=float(x.min()),
        max=float(x.max()),
        skewness=m3 / m2**1.5,
        kurtosis=m4 / (m2 * m2),
    )
