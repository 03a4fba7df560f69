"""Shuffled and Fourier phase-randomised surrogates.

Shuffling keeps the value distribution and destroys temporal correlations.
Phase randomisation keeps the power spectrum (linear correlations) and pushes
the value distribution towards a Gaussian.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import TimeSeries, as_series
from .errors import MultifractalError, TooShortError


class SurrogateMode(str, Enum):
    SHUFFLE = "shuffle"
    PHASE_SINGLE_ANGLE = "phase_single_angle"
    PHASE_RANDOM = "phase_random"


@dataclass(frozen=True)
class SurrogateConfig:
    """``swap_factor`` transpositions per sample in transposition shuffling;
    ``fisher_yates`` switches to a single unbiased permutation pass."""

    seed: int = 0
    mode: SurrogateMode = SurrogateMode.SHUFFLE
    swap_factor: int = 20
    fisher_yates: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mode", SurrogateMode(self.mode))
        if int(self.swap_factor) < 1:
            raise MultifractalError(f"swap_factor must be >= 1, got {self.swap_factor}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(int(self.seed) & (2**64 - 1)))


def shuffle(series, cfg: SurrogateConfig = SurrogateConfig()) -> TimeSeries:
    """Random permutation of the samples, deterministic per seed.

    The default draws ``swap_factor * N`` random index pairs and swaps each
    pair in turn.
    """
    series = as_series(series)
    n = len(series)
    if n < 2:
        raise TooShortError(f"shuffle needs at least 2 samples, got {n}")
    rng = cfg.rng()
    out = series.values.copy()
    if cfg.fisher_yates:
        out = out[rng.permutation(n)]
    else:
        pairs = rng.integers(0, n, size=(int(cfg.swap_factor) * n, 2)).tolist()
        buf = out.tolist()
        for a, b in pairs:
            buf[a], buf[b] = buf[b], buf[a]
        out = np.array(buf, dtype=float)
    return series.with_values(out, label=_tag(series.label, "shuffled"))


def _positive_bins(n: int) -> np.ndarray:
    # Strictly positive, non-Nyquist frequency bins of an n-point DFT.
    return np.arange(1, (n - 1) // 2 + 1)


def phase_randomize(series, cfg: SurrogateConfig | None = None, angle: float | None = None) -> TimeSeries:
    """Rotate the Fourier phases and transform back.

    ``phase_single_angle`` advances every positive-frequency phase by one
    seeded angle in (0, 2 pi); ``phase_random`` draws an independent angle per
    bin. Negative frequencies get the conjugate rotation, DC and Nyquist bins
    are left untouched, so the output is real and every bin keeps its
    amplitude. Passing ``angle`` forces a single-angle rotation by that value.
    """
    series = as_series(series)
    n = len(series)
    if n < 4:
        raise TooShortError(f"phase_randomize needs at least 4 samples, got {n}")
    if cfg is None:
        cfg = SurrogateConfig(mode=SurrogateMode.PHASE_SINGLE_ANGLE)
    pos = _positive_bins(n)
    if angle is not None:
        theta = np.full(pos.size, float(angle))
    else:
        rng = cfg.rng()
        if cfg.mode is SurrogateMode.PHASE_RANDOM:
            theta = _open_angle(rng, pos.size)
        elif cfg.mode is SurrogateMode.PHASE_SINGLE_ANGLE:
            theta = np.full(pos.size, _open_angle(rng, 1)[0])
        else:
            raise MultifractalError(f"mode {cfg.mode.value!r} is not a phase mode")

    spec = np.fft.fft(series.values)
    rot = np.exp(1j * theta)
    spec[pos] *= rot
    spec[n - pos] *= np.conj(rot)
    back = np.fft.ifft(spec)
    scale = max(float(np.max(np.abs(series.values))), np.finfo(float).tiny)
    residue = float(np.max(np.abs(back.imag)))
    # conjugate symmetry is constructed above; this only catches a bookkeeping bug
    assert residue <= 1e-9 * scale, f"imaginary residue {residue:g} after inverse FFT"
    return series.with_values(back.real, label=_tag(series.label, "surrogate"))


def _open_angle(rng: np.random.Generator, size: int) -> np.ndarray:
    theta = rng.uniform(0.0, 2.0 * np.pi, size)
    # uniform() is [0, 2pi); zero would be the identity rotation
    while np.any(theta == 0.0):
        theta[theta == 0.0] = rng.uniform(0.0, 2.0 * np.pi, int(np.sum(theta == 0.0)))
    return theta


def make_surrogate(series, cfg: SurrogateConfig) -> TimeSeries:
    if cfg.mode is SurrogateMode.SHUFFLE:
        return shuffle(series, cfg)
    return phase_randomize(series, cfg)


def _tag(label: str, what: str) -> str:
    return f"{label} ({what})" if label else what
