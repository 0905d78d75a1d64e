import math

import numpy as np
import pytest

from slelab.bubbles import (
    AXIS_BAND_FACTOR,
    default_axis_band,
    diameter,
    extract_bubbles,
    indicator_sequence,
    k_r_n,
    nth_at_least,
    window_identity_statistic,
)
from slelab.dataclasses import Bubble, BubbleSequence
from slelab.driving import sample_sle_driving
from slelab.enums import BubbleType
from slelab.exceptions import (
    InsufficientDataError,
    InvalidParameterError,
    NotFoundError,
    ResolutionError,
)
from slelab.trace import compute_trace, polyline_trace
from slelab.verify import BUBBLE_FIXTURES, FIXTURE_RESOLUTION


@pytest.mark.parametrize("name", sorted(BUBBLE_FIXTURES))
def test_fixture_types(fixture_trace, name):
    _, types, bits = BUBBLE_FIXTURES[name]
    bs = extract_bubbles(fixture_trace(name), resolution=FIXTURE_RESOLUTION, anchor_diameter=0.5)

    assert bs.types == types
    if bits is not None:
        assert indicator_sequence(bs).bits == bits


def test_single_loop_geometry(fixture_trace):
    bs = extract_bubbles(fixture_trace("single-loop"), resolution=FIXTURE_RESOLUTION)
    (bubble,) = bs.bubbles
    assert bubble.touches_negative_axis and bubble.touches_positive_axis
    assert bubble.diameter == pytest.approx(math.hypot(3.0, 1.0), abs=0.1)
    assert bs.anchor == 0


def test_formation_order(fixture_trace):
    bs = extract_bubbles(fixture_trace("framed-pockets"), resolution=FIXTURE_RESOLUTION)
    times = [b.formation_time for b in bs.bubbles]
    assert times == sorted(times)
    assert [b.order_index for b in bs.bubbles] == list(range(6))


def test_region_between_curve_and_axis_is_a_bubble():
    trace = polyline_trace([0, 1j, -1 + 1j, -1, -2, -2 + 2j, -3 + 2j], 0.02)
    bs = extract_bubbles(trace, resolution=1.0 / 128)

    (bubble,) = bs.bubbles
    assert bubble.type_code is BubbleType.NEGATIVE
    assert bubble.touches_negative_axis and not bubble.touches_positive_axis
    assert bubble.diameter == pytest.approx(math.sqrt(2.0), abs=0.05)
    assert bs.anchor is None


def test_uncovered_axis_closes_pockets(fixture_trace):
    bs = extract_bubbles(fixture_trace("framed-pockets"), resolution=FIXTURE_RESOLUTION)
    flags = [(b.touches_negative_axis, b.touches_positive_axis) for b in bs.bubbles]
    assert flags == [(True, True), (True, False), (False, True), (False, True), (False, True), (True, True)]


def test_extraction_is_deterministic(fixture_trace):
    trace = fixture_trace("framed-pockets")
    assert extract_bubbles(trace, resolution=FIXTURE_RESOLUTION) == extract_bubbles(
        trace, resolution=FIXTURE_RESOLUTION
    )


def test_coarse_sampling_is_rejected():
    trace = polyline_trace([0, -1, -1 + 1j, 1 + 1j, 1], 0.01)
    with pytest.raises(ResolutionError):
        extract_bubbles(trace, resolution=FIXTURE_RESOLUTION)


def test_sle_bubbles_are_consistent():
    trace = compute_trace(sample_sle_driving(6.0, 0.25, 4000, seed=17), 4)
    bs = extract_bubbles(trace, resolution=1.0 / 256)
    for b in bs.bubbles:
        assert b.type_code is BubbleType.classify(b.touches_negative_axis, b.touches_positive_axis)
        assert b.diameter >= 3.0 / 256


def test_axis_band_closes_near_touch():
    trace = polyline_trace([0, 1j, -1 + 1j, -1 + 0.05j, -2 + 0.05j, -2 + 2j, -3 + 2j], 0.02)
    assert default_axis_band(trace) == 0.0
    assert extract_bubbles(trace, resolution=1.0 / 128).bubbles == ()

    (bubble,) = extract_bubbles(trace, resolution=1.0 / 128, axis_band=0.1).bubbles
    assert bubble.type_code is BubbleType.NEGATIVE
    assert bubble.diameter < math.sqrt(2.0)
    with pytest.raises(InvalidParameterError):
        extract_bubbles(trace, resolution=1.0 / 128, axis_band=-0.1)


def test_default_axis_band_of_loewner_trace():
    path = sample_sle_driving(6.0, 1.0, 4000, seed=3)
    trace = compute_trace(path, 4)
    band = default_axis_band(trace)
    assert band == pytest.approx(AXIS_BAND_FACTOR * math.sqrt(6.0 * 4 * path.dt))
    assert band > 2.0 * math.sqrt(path.dt)


def _large_type3(trace, resolution):
    bs = extract_bubbles(trace, resolution=resolution)
    return sum(1 for b in bs.type3() if b.diameter >= 0.1)


@pytest.mark.slow
def test_type3_count_is_stable_under_resolution():
    stable = []
    for seed in range(20):
        trace = compute_trace(sample_sle_driving(6.0, 0.25, 4000, seed=seed), 4)
        stable.append(abs(_large_type3(trace, 1.0 / 256) - _large_type3(trace, 1.0 / 512)) <= 1)
    assert np.mean(stable) >= 0.9


@pytest.mark.slow
def test_large_type3_bubbles_are_typical():
    found = [
        _large_type3(compute_trace(sample_sle_driving(6.0, 1.0, 4000, seed=seed), 4), 1.0 / 512) > 0
        for seed in range(20)
    ]
    assert sum(found) > len(found) / 2


def test_indicator_from_types():
    bs = BubbleSequence.from_types([3, 1, 3, 0, 3, 2, 1, 3])
    ind = indicator_sequence(bs)
    assert ind.bits == (1, 0, 1)
    assert ind.anchor_offset == 0


def test_indicator_anchor_offset():
    bs = BubbleSequence.from_types(
        [3, 1, 3, 0, 3, 2, 3],
        diameters=[0.5, 0.1, 0.5, 0.1, 2.0, 0.1, 0.4],
    )
    assert bs.anchor == 4
    ind = indicator_sequence(bs)
    assert ind.bits == (1, 0, 1)
    assert ind.anchor_offset == 2
    assert ind.window(6) == (1,)


def test_indicator_needs_two_type3():
    with pytest.raises(InsufficientDataError):
        indicator_sequence(BubbleSequence.from_types([1, 3, 2]))


def test_k_r_n():
    bs = BubbleSequence.from_types([3, 1, 3, 3, 3], diameters=[0.2, 5.0, 1.5, 0.3, 2.0])
    assert k_r_n(bs, 1.0, 1) == 1
    assert k_r_n(bs, 1.0, 2) == 3
    with pytest.raises(NotFoundError):
        k_r_n(bs, 1.0, 3)
    with pytest.raises(InvalidParameterError):
        k_r_n(bs, 0.0, 1)


def test_nth_at_least():
    assert nth_at_least([0.1, 2, 3], 1.0, 2) == 2
    with pytest.raises(InvalidParameterError):
        nth_at_least([1.0], 1.0, 0)


def test_diameter():
    square = np.array([0, 1, 1 + 1j, 1j])
    assert diameter(square) == pytest.approx(math.sqrt(2))
    assert diameter(np.linspace(0, 1, 20) + 0j) == pytest.approx(1.0)
    assert diameter([2 + 2j]) == 0.0
    assert diameter(np.array([[0.0, 0.0], [3.0, 4.0]])) == pytest.approx(5.0)
    with pytest.raises(InvalidParameterError):
        diameter(np.array([], dtype=complex))


def test_bubble_flags_must_match_type():
    with pytest.raises(InvalidParameterError):
        Bubble(0, BubbleType.BOTH, 1.0, True, False, 1)


def test_window_identity_statistic():
    pairs = [((0, 1), (0, 1)), ((1, 1), (0, 1))]
    same, predicted, sigma = window_identity_statistic(pairs)
    assert same == 0.5
    assert predicted == pytest.approx(0.625)
    assert sigma == pytest.approx(math.sqrt(0.625 * 0.375 / 2))
    with pytest.raises(InsufficientDataError):
        window_identity_statistic([])
