"""Pulse shapes, catapult sequences and effective rise times."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lzphoton.model import ValidationError
from lzphoton.pulses import (
    PulseSegment,
    PulseShape,
    catapult,
    crossing_time,
    effective_rise_time,
    sample,
    segment_bounds,
    trajectory,
)
from oracles import bisect, central_diff

SHAPES = list(PulseShape)
T_R = 300e-12


def ng_segment(shape, t_r=T_R, a=0.1, b=0.9):
    # chi = n_g - 1/2; the exponential reference point n_g = 0 sits at chi = -1/2
    return PulseSegment(shape, a - 0.5, b - 0.5, t_r, origin=-0.5)


@pytest.mark.parametrize("shape", SHAPES)
def test_endpoints(shape):
    seg = ng_segment(shape)
    assert sample(seg, 0.0) == pytest.approx(-0.4, abs=1e-12)
    assert sample(seg, T_R) == pytest.approx(0.4, abs=1e-12)


@pytest.mark.parametrize("shape", SHAPES)
def test_monotone(shape):
    v = ng_segment(shape).sample(np.linspace(0, T_R, 2001))
    assert np.all(np.diff(v) > 0)


def test_midpoints():
    assert sample(PulseSegment("linear", -0.4, 0.4, 1.0), 0.5) == pytest.approx(0.0, abs=1e-15)
    assert sample(PulseSegment("tanh", -0.4, 0.4, 1.0), 0.5) == pytest.approx(0.0, abs=1e-15)
    assert sample(PulseSegment("gaussian", -0.4, 0.4, 1.0), 1.0) == 0.4


def test_rejects_time_outside():
    seg = ng_segment("linear")
    with pytest.raises(ValidationError):
        seg.sample(-1e-15)
    with pytest.raises(ValidationError):
        seg.sample(T_R * 1.001)


def test_rejects_bad_rise_time():
    with pytest.raises(ValidationError):
        PulseSegment("linear", 0.0, 1.0, 0.0)


@pytest.mark.parametrize("a,b", [(-0.1, 0.1), (0.0, 0.3), (0.2, 0.2)])
def test_exponential_endpoint_checks(a, b):
    with pytest.raises(ValidationError):
        PulseSegment("exponential", a, b, 1.0)


@pytest.mark.parametrize("shape", SHAPES)
def test_rate_matches_finite_difference(shape):
    seg = ng_segment(shape)
    for t in np.linspace(0.05, 0.95, 7) * T_R:
        fd = central_diff(lambda x: float(seg._value(x)), t, T_R * 1e-6)
        assert seg.rate(t) == pytest.approx(fd, rel=1e-6)


class TestEffectiveRiseTime:
    def test_linear(self):
        assert effective_rise_time(ng_segment("linear")) == pytest.approx(T_R, rel=1e-12)

    def test_tanh(self):
        assert effective_rise_time(ng_segment("tanh")) == pytest.approx(T_R * math.tanh(3) / 3, rel=1e-10)

    def test_exponential(self):
        # n_g = 0.1 * 9**tau crosses 0.5 with slope 0.5 ln 9 / t_r
        expected = 0.8 / (0.5 * math.log(9)) * T_R
        assert effective_rise_time(ng_segment("exponential")) == pytest.approx(expected, rel=1e-10)
        assert expected / T_R == pytest.approx(0.728, abs=1e-3)

    def test_gaussian_against_sampling_oracle(self):
        seg = ng_segment("gaussian")
        # independent route: closed-form curve, bisection for the crossing, finite difference for the slope
        e9 = math.exp(-9)

        def ng(t):
            tau = t / T_R
            return 0.1 + 0.8 * (math.exp(-9 * (1 - tau) ** 2) - e9) / (1 - e9)

        t_c = bisect(lambda t: ng(t) - 0.5, 0.0, T_R, tol=1e-16)
        slope = central_diff(ng, t_c, T_R * 1e-7)
        assert effective_rise_time(seg) == pytest.approx(0.8 / slope, rel=1e-7)

    def test_crossing_not_bracketed(self):
        with pytest.raises(ValidationError):
            effective_rise_time(PulseSegment("linear", 0.1, 0.3, 1.0))

    @given(t_r=st.floats(1e-12, 1e-8))
    def test_scales_with_rise_time(self, t_r):
        for shape in SHAPES:
            ratio = effective_rise_time(ng_segment(shape, t_r)) / t_r
            assert ratio == pytest.approx(effective_rise_time(ng_segment(shape, 1.0)), rel=1e-9)


class TestCatapult:
    def test_reference_sequence(self):
        chi0 = 1.0
        seq = catapult(-0.2 * chi0, 0.35 * chi0, chi0, T_R)
        ends = [(s.chi_start, s.chi_end) for s in seq.segments]
        assert ends == [(-0.2, -0.5), (-0.5, 0.5), (0.5, 0.35)]
        assert seq.duration == pytest.approx(3 * T_R)
        assert segment_bounds(seq) == pytest.approx([0, T_R, 2 * T_R, 3 * T_R])

    def test_symmetric_crossing_at_middle(self):
        seq = catapult(0.0, 0.0, 0.8, T_R)
        assert crossing_time(seq.middle) == pytest.approx(T_R / 2, rel=1e-12)

    @given(
        chi_i=st.floats(-0.5, 0.5),
        chi_f=st.floats(-0.5, 0.5),
        chi0=st.floats(0.01, 2.0),
        t_r=st.floats(1e-12, 1e-8),
    )
    def test_middle_slew_independent_of_endpoints(self, chi_i, chi_f, chi0, t_r):
        seq = catapult(chi_i * chi0, chi_f * chi0, chi0, t_r)
        assert seq.middle.rate(t_r / 2) == pytest.approx(chi0 / t_r, rel=1e-12)
        assert seq.middle.span == pytest.approx(chi0, rel=1e-15)

    @given(chi_i=st.floats(-0.5, 0.5), chi_f=st.floats(-0.5, 0.5), shape=st.sampled_from(["linear", "gaussian", "tanh"]))
    def test_reverse_is_involution_and_mirror(self, chi_i, chi_f, shape):
        seq = catapult(chi_i, chi_f, 1.0, T_R, shape)
        assert seq.reverse().reverse() == seq
        t = np.linspace(0, seq.duration, 301)
        np.testing.assert_allclose(seq.reverse().sample(t), seq.sample(seq.duration - t), atol=1e-12)

    @given(chi_i=st.floats(-0.5, 0.5), chi_f=st.floats(-0.5, 0.5))
    def test_continuity_at_picosecond_resolution(self, chi_i, chi_f):
        t_r = 50e-12
        seq = catapult(chi_i, chi_f, 1.0, t_r)
        v = seq.sample(np.arange(0, seq.duration, 1e-12))
        max_slew = 1.0 / t_r
        assert np.max(np.abs(np.diff(v))) <= max_slew * 1e-12 * (1 + 1e-9)

    def test_rho_shrinks_middle(self):
        seq = catapult(0.0, 0.0, 1.0, T_R, rho=0.8)
        assert (seq.middle.chi_start, seq.middle.chi_end) == (-0.4, 0.4)

    @pytest.mark.parametrize(
        "args",
        [(-0.6, 0.0, 1.0, T_R), (0.0, 0.51, 1.0, T_R), (0.0, 0.0, 0.0, T_R), (0.0, 0.0, 1.0, 0.0)],
    )
    def test_rejects(self, args):
        with pytest.raises(ValidationError):
            catapult(*args)

    def test_rejects_rho(self):
        with pytest.raises(ValidationError):
            catapult(0.0, 0.0, 1.0, T_R, rho=1.2)


def test_trajectory_has_no_duplicate_boundaries():
    seq = catapult(-0.2, 0.35, 1.0, 1.0)
    pts = list(trajectory(seq, 0.1))
    ts = [t for t, _ in pts]
    assert len(ts) == len(set(ts)) == 31
    assert ts[-1] == pytest.approx(3.0)
    assert pts[0][1] == pytest.approx(-0.2) and pts[-1][1] == pytest.approx(0.35)
