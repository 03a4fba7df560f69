"""Window layouts over a profile.

Two strategies are provided:

* ``mfdfa_plan`` - the classic scheme: ``N_s = N // s`` non-overlapping windows
  laid from the start of the profile, and the same number laid from the end,
  for ``2 * N_s`` windows in total.
* ``biosw_plan`` - binary overlapped sliding windows: the profile is cut into
  two halves of length ``n = N // 2``. Windows of length ``s`` advance by a
  stride of ``s - l`` from the left end over the first half and, mirrored, from
  the right end over the second half. Each pass holds
  ``ceil((n - s) / (s - l)) + 1`` windows; the last window of a pass may spill
  (by fewer than ``s - l`` samples) across the midpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BadOverlapError, ScaleTooLargeError, ScaleTooSmallError

MIN_SCALE = 4


class Method(str, Enum):
    MFDFA = "mfdfa"
    BIOSW = "biosw"


@dataclass(frozen=True)
class Window:
    start: int
    length: int

    @property
    def stop(self) -> int:
        return self.start + self.length


@dataclass(frozen=True, eq=False)
class SegmentationPlan:
    """Window starts for one scale.

    ``starts`` holds the forward windows first, then the backward ones;
    ``counts`` gives the size of each group.
    """

    n_total: int
    scale: int
    method: Method
    starts: np.ndarray
    counts: tuple[int, int]
    overlap: int = 0

    def __post_init__(self):
        starts = np.asarray(self.starts, dtype=np.int64)
        starts.setflags(write=False)
        object.__setattr__(self, "starts", starts)
        # hard bounds check, independent of how the starts were produced
        assert starts.size == sum(self.counts)
        assert starts.size == 0 or (starts.min() >= 0 and starts.max() + self.scale <= self.n_total)

    @property
    def windows(self) -> list[Window]:
        return [Window(int(a), self.scale) for a in self.starts]

    @property
    def forward_starts(self) -> np.ndarray:
        return self.starts[: self.counts[0]]

    @property
    def backward_starts(self) -> np.ndarray:
        return self.starts[self.counts[0] :]

    def __len__(self):
        return int(self.starts.size)


def _check_scale_floor(scale: int, order: int):
    floor = max(MIN_SCALE, order + 2)
    if scale < floor:
        raise ScaleTooSmallError(
            f"scale {scale} is below the minimum {floor} for detrending order {order}"
        )


def mfdfa_plan(n_total: int, scale: int, order: int = 1) -> SegmentationPlan:
    """Classic bidirectional non-overlapping layout.

    Raises ScaleTooLargeError when ``scale > n_total // 4`` and
    ScaleTooSmallError when ``scale < max(4, order + 2)``.
    """
    n_total, scale = int(n_total), int(scale)
    _check_scale_floor(scale, order)
    if scale > n_total // 4:
        raise ScaleTooLargeError(f"scale {scale} exceeds N/4 = {n_total // 4} for N = {n_total}")
    ns = n_total // scale
    k = np.arange(ns, dtype=np.int64)
    forward = k * scale
    backward = n_total - (k + 1) * scale
    return SegmentationPlan(
        n_total=n_total,
        scale=scale,
        method=Method.MFDFA,
        starts=np.concatenate([forward, backward]),
        counts=(ns, ns),
    )


def biosw_windows_per_half(n_total: int, scale: int, overlap: int) -> int:
    """Windows per pass, ``ceil((n - s) / (s - l)) + 1`` with ``n = N // 2``."""
    half = n_total // 2
    stride = scale - overlap
    return -(-(half - scale) // stride) + 1


def biosw_plan(n_total: int, scale: int, overlap: int, order: int = 1) -> SegmentationPlan:
    """Binary overlapped sliding-window layout.

    ``overlap`` is the number of samples shared by neighbouring windows and
    must satisfy ``0 < overlap < scale / 2``.
    """
    n_total, scale, overlap = int(n_total), int(scale), int(overlap)
    _check_scale_floor(scale, order)
    if not 0 < overlap < scale / 2:
        raise BadOverlapError(f"overlap must satisfy 0 < l < s/2 = {scale / 2}, got l = {overlap}")
    half = n_total // 2
    if scale > half:
        raise ScaleTooLargeError(f"scale {scale} exceeds N/2 = {half} for N = {n_total}")
    stride = scale - overlap
    count = biosw_windows_per_half(n_total, scale, overlap)
    k = np.arange(count, dtype=np.int64)
    forward = k * stride
    backward = n_total - scale - k * stride
    return SegmentationPlan(
        n_total=n_total,
        scale=scale,
        method=Method.BIOSW,
        starts=np.concatenate([forward, backward]),
        counts=(count, count),
        overlap=overlap,
    )


def overlap_for_scale(scale: int, fraction: float) -> int:
    """Overlap length ``l`` for a fractional setting ``l / s``.

    Rounds down, with a floor of one sample.
    """
    if not 0.0 < fraction < 0.5:
        raise BadOverlapError(f"overlap fraction must lie in (0, 0.5), got {fraction}")
    return max(1, int(math.floor(fraction * scale)))


def make_plan(method, n_total: int, scale: int, order: int = 1, overlap_frac: float = 0.25):
    method = Method(method)
    if method is Method.MFDFA:
        return mfdfa_plan(n_total, scale, order)
    return biosw_plan(n_total, scale, overlap_for_scale(scale, overlap_frac), order)


def segment_count_ratio(n_total: int, scale: int, overlap: int, order: int = 1) -> float:
    """``2 * N*_s / N_s``: Bi-OSW window count relative to the classic ``N_s``.

    A value of 1 means the overlapped layout uses exactly half the windows of
    the bidirectional one.
    """
    bi = biosw_plan(n_total, scale, overlap, order)
    mf = mfdfa_plan(n_total, scale, order)
    return len(bi) / mf.counts[0]
