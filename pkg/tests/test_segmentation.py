import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bimfdfa.errors import BadOverlapError, ScaleTooLargeError, ScaleTooSmallError
from bimfdfa.segmentation import (
    Method,
    biosw_plan,
    biosw_windows_per_half,
    make_plan,
    mfdfa_plan,
    overlap_for_scale,
    segment_count_ratio,
)


def test_mfdfa_divisible():
    plan = mfdfa_plan(100, 10)
    assert len(plan) == 20
    assert plan.counts == (10, 10)
    assert plan.forward_starts.tolist() == list(range(0, 100, 10))
    assert plan.backward_starts.tolist() == list(range(90, -1, -10))
    assert plan.method is Method.MFDFA


def test_mfdfa_remainder_shifts_backward():
    plan = mfdfa_plan(105, 10)
    assert len(plan) == 20
    assert plan.forward_starts.tolist() == list(range(0, 91, 10))
    assert plan.backward_starts.tolist() == [95, 85, 75, 65, 55, 45, 35, 25, 15, 5]


def test_mfdfa_gold_length():
    plan = mfdfa_plan(2850, 50)
    assert plan.counts == (57, 57)
    assert len(plan) == 114


@pytest.mark.parametrize("n, s", [(100, 26), (39, 10)])
def test_mfdfa_scale_too_large(n, s):
    with pytest.raises(ScaleTooLargeError):
        mfdfa_plan(n, s)


@pytest.mark.parametrize("s, order", [(3, 1), (4, 3), (6, 5)])
def test_scale_too_small(s, order):
    with pytest.raises(ScaleTooSmallError):
        mfdfa_plan(1000, s, order)
    with pytest.raises(ScaleTooSmallError):
        biosw_plan(1000, s, 1, order)


def _stride_rule(n_total, s, l):
    # literal reading: keep stepping while the start is left of n - l
    half, starts, a = n_total // 2, [], 0
    while a < half - l:
        starts.append(a)
        a += s - l
    return starts


def test_biosw_example_l4():
    plan = biosw_plan(100, 10, 4)
    assert plan.forward_starts.tolist() == [0, 6, 12, 18, 24, 30, 36, 42]
    assert plan.counts == (8, 8)
    assert len(plan) == 16
    last = plan.windows[plan.counts[0] - 1]
    assert (last.start, last.stop) == (42, 52)  # spills 2 samples past the midpoint
    assert plan.forward_starts.tolist() == _stride_rule(100, 10, 4)


def test_biosw_example_l2():
    plan = biosw_plan(100, 10, 2)
    assert plan.forward_starts.tolist() == [0, 8, 16, 24, 32, 40]
    assert len(plan) == 12


def test_biosw_backward_mirrors_forward():
    plan = biosw_plan(101, 10, 3)
    fw = plan.forward_starts
    bw = plan.backward_starts
    np.testing.assert_array_equal(101 - (bw + 10), fw)


@pytest.mark.parametrize("l", [0, 5, 6, -1])
def test_biosw_bad_overlap(l):
    with pytest.raises(BadOverlapError):
        biosw_plan(100, 10, l)


def test_biosw_l4_accepted_l5_rejected():
    biosw_plan(100, 10, 4)
    with pytest.raises(BadOverlapError):
        biosw_plan(100, 10, 5)


def test_biosw_scale_too_large():
    with pytest.raises(ScaleTooLargeError):
        biosw_plan(100, 51, 10)


def test_segment_count_ratio_examples():
    assert segment_count_ratio(100, 10, 2) == pytest.approx(1.2)
    assert segment_count_ratio(100, 10, 4) == pytest.approx(1.6)


def test_segment_count_ratio_unity_identity():
    # ratio is exactly 1 when ceil((n-s)/(s-l)) + 1 == (N//s) / 2
    hits = 0
    for n in range(40, 400, 7):
        for s in range(4, n // 4 + 1):
            for l in range(1, (s + 1) // 2):
                if not l < s / 2:
                    continue
                lhs = biosw_windows_per_half(n, s, l)
                ratio = segment_count_ratio(n, s, l)
                assert (ratio == 1.0) == (2 * lhs == n // s)
                hits += ratio == 1.0
    assert hits == 0  # overlapping windows always outnumber the classic N_s


def test_overlap_for_scale():
    assert overlap_for_scale(10, 0.25) == 2
    assert overlap_for_scale(4, 0.25) == 1
    with pytest.raises(BadOverlapError):
        overlap_for_scale(10, 0.5)


def test_make_plan_dispatch():
    assert make_plan("mfdfa", 200, 20).method is Method.MFDFA
    p = make_plan("biosw", 200, 20, overlap_frac=0.25)
    assert p.method is Method.BIOSW and p.overlap == 5


@settings(max_examples=300, deadline=None)
@given(st.integers(16, 3000), st.data())
def test_mfdfa_invariants(n, data):
    s = data.draw(st.integers(4, n // 4))
    plan = mfdfa_plan(n, s)
    ns = n // s
    assert len(plan) == 2 * ns
    assert np.all(np.diff(plan.forward_starts) == s)
    assert plan.backward_starts.min() == n - ns * s
    covered = np.zeros(n, dtype=bool)
    for w in plan.windows:
        assert 0 <= w.start and w.stop <= n
        covered[w.start : w.stop] = True
    assert covered.all()
    assert np.array_equal(plan.starts, mfdfa_plan(n, s).starts)


@settings(max_examples=300, deadline=None)
@given(st.integers(8, 3000), st.data())
def test_biosw_invariants(n, data):
    s = data.draw(st.integers(4, n // 2))
    l = data.draw(st.integers(1, (s - 1) // 2))
    plan = biosw_plan(n, s, l)
    half = n // 2
    k = biosw_windows_per_half(n, s, l)
    assert plan.counts == (k, k)
    assert np.all(np.diff(plan.forward_starts) == s - l)
    assert np.all(np.diff(plan.backward_starts) == -(s - l))
    assert plan.starts.min() >= 0 and plan.starts.max() + s <= n
    assert plan.forward_starts.tolist() == _stride_rule(n, s, l)
    # forward pass reaches the midpoint, spilling by fewer than s - l samples
    fw_end = plan.forward_starts[-1] + s
    assert half <= fw_end < half + (s - l)
    assert np.array_equal(plan.starts, biosw_plan(n, s, l).starts)
