"""Multifractal detrended fluctuation analysis with classic (MF-DFA) and binary
overlapped sliding-window (Bi-OSW) segmentation."""

from .core import DescriptiveStats, Profile, SeriesKind, TimeSeries, describe, log_returns, profile
from .fluctuation import (
    DetrendConfig,
    FluctuationSurface,
    fluctuation_surface,
    fq,
    surface_for_series,
    window_variance,
    window_variances,
)
from .scaling import (
    DEFAULT_Q_GRID,
    HurstSpectrum,
    ScalingExponents,
    SingularitySpectrum,
    default_scales,
    delta_h,
    fit_hurst,
    legendre,
    log_scales,
    tau,
)
from .segmentation import Method, SegmentationPlan, Window, biosw_plan, mfdfa_plan, segment_count_ratio
from .surrogate import SurrogateConfig, SurrogateMode, phase_randomize, shuffle
from .synth import GeneratorKind, GeneratorSpec, cascade_h_analytic, generate

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_Q_GRID",
    "DescriptiveStats",
    "DetrendConfig",
    "FluctuationSurface",
    "GeneratorKind",
    "GeneratorSpec",
    "HurstSpectrum",
    "Method",
    "Profile",
    "ScalingExponents",
    "SegmentationPlan",
    "SeriesKind",
    "SingularitySpectrum",
    "SurrogateConfig",
    "SurrogateMode",
    "TimeSeries",
    "Window",
    "biosw_plan",
    "cascade_h_analytic",
    "default_scales",
    "delta_h",
    "describe",
    "fit_hurst",
    "fluctuation_surface",
    "fq",
    "generate",
    "legendre",
    "log_returns",
    "log_scales",
    "mfdfa_plan",
    "phase_randomize",
    "profile",
    "segment_count_ratio",
    "shuffle",
    "surface_for_series",
    "tau",
    "window_variance",
    "window_variances",
]
