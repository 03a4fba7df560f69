"""Synthetic series with known scaling, used as pipeline oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import SeriesKind, TimeSeries
from .errors import BadPError, BadSpecError


class GeneratorKind(str, Enum):
    GAUSSIAN_IID = "gaussian_iid"
    STUDENT_T = "student_t"
    BINOMIAL_CASCADE = "binomial_cascade"
    RANDOM_WALK = "random_walk"


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.

    ``params`` keys: ``df`` for student_t; ``p`` and optionally
    ``randomize`` (default True) for binomial_cascade.
    """

    kind: GeneratorKind
    length: int
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", GeneratorKind(self.kind))
        except ValueError as exc:
            raise BadSpecError(str(exc)) from None
        if int(self.length) < 1:
            raise BadSpecError(f"length must be positive, got {self.length}")
        if self.kind is GeneratorKind.BINOMIAL_CASCADE:
            n = int(self.length)
            if n & (n - 1):
                raise BadSpecError(f"cascade length must be a power of two, got {n}")
            p = self.params.get("p")
            if p is None or not 0.5 < p < 1.0:
                raise BadSpecError(f"cascade weight p must lie in (0.5, 1), got {p}")
        if self.kind is GeneratorKind.STUDENT_T:
            df = self.params.get("df")
            if df is None or not df > 2:
                raise BadSpecError(f"student_t needs df > 2, got {df}")


def binomial_cascade(k: int, p: float, rng: np.random.Generator | None = None) -> np.ndarray:
    """Multiplicative binomial measure on ``2**k`` cells (total mass 1).

    At every node one half receives weight ``p`` and the other ``1 - p``. With
    an ``rng`` the side getting ``p`` is a coin flip per node, otherwise the
    left half always gets ``p``.
    """
    mass = np.ones(1)
    for _ in range(k):
        if rng is None:
            left = np.full(mass.size, p)
        else:
            left = np.where(rng.random(mass.size) < 0.5, p, 1.0 - p)
        mass = np.column_stack([mass * left, mass * (1.0 - left)]).reshape(-1)
    return mass


def generate(spec: GeneratorSpec) -> TimeSeries:
    rng = np.random.default_rng(np.random.SeedSequence(int(spec.seed) & (2**64 - 1)))
    n = int(spec.length)
    kind = spec.kind
    if kind is GeneratorKind.GAUSSIAN_IID:
        values = rng.standard_normal(n)
    elif kind is GeneratorKind.STUDENT_T:
        values = rng.standard_t(float(spec.params["df"]), n)
    elif kind is GeneratorKind.RANDOM_WALK:
        values = np.cumsum(rng.standard_normal(n))
    else:
        randomize = spec.params.get("randomize", True)
        values = binomial_cascade(n.bit_length() - 1, float(spec.params["p"]), rng if randomize else None)
    return TimeSeries(values, label=kind.value, kind=SeriesKind.GENERIC)


def cascade_h_analytic(p: float, q: float) -> float:
    """Generalised Hurst exponent of the binomial cascade.

    ``h(q) = 1/q - ln(p^q + (1-p)^q) / (q ln 2)``, with the q -> 0 limit
    ``-(ln p + ln(1-p)) / (2 ln 2)``. ``p = 0.5`` is the uniform measure,
    h = 1 for every q.
    """
    if not 0.5 <= p < 1.0:
        raise BadPError(f"p must lie in [0.5, 1), got {p}")
    if q == 0.0:
        return -(math.log(p) + math.log1p(-p)) / (2.0 * math.log(2.0))
    log_sum = np.logaddexp(q * math.log(p), q * math.log1p(-p))
    return float(1.0 / q - log_sum / (q * math.log(2.0)))
