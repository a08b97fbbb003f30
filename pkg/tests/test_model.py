"""Tests for parameter records, capacitances and Hamiltonians."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lzphoton.model import (
    ChargeBasis,
    CpbParams,
    FluxParams,
    ValidationError,
    c_sigma,
    charging_energy_hz,
    cpb_gate_charge_for_frequency,
    cpb_hamiltonian,
    cpb_transition_frequency,
    effective_capacitance,
    flux_hamiltonian,
    flux_offset_for_frequency,
    flux_transition_frequency,
    is_hermitian,
    junction_gamma,
)
from oracles import bisect, cpb_matrix

REF_CPB = CpbParams.from_energies(1e9, 19.27e9)


def hand_ceff(c_ff, km_ghz=90.0):
    # beta_hz = 3.2/C THz with C in fF, so km/beta = km_ghz * c_ff / 3200
    return c_ff / (1 + km_ghz * c_ff / 3200.0)


class TestCapacitance:
    def test_zero_cutoff_is_identity(self):
        assert effective_capacitance(2.3e-15, 0.0) == 2.3e-15

    @pytest.mark.parametrize("c_ff", [1.0, 2.3, 0.01, 7.5])
    def test_against_hand_arithmetic(self, c_ff):
        got = effective_capacitance(c_ff * 1e-15, 90e9) * 1e15
        assert got == pytest.approx(hand_ceff(c_ff), rel=1e-12)

    def test_one_femtofarad(self):
        assert effective_capacitance(1e-15, 90e9) == pytest.approx(1e-15 / 1.028125, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            effective_capacitance(0.0, 90e9)
        with pytest.raises(ValidationError):
            effective_capacitance(-1e-15, 90e9)

    @given(
        c=st.floats(1e-18, 1e-13),
        k1=st.floats(0, 1e12),
        k2=st.floats(0, 1e12),
    )
    def test_bounded_and_monotone_in_cutoff(self, c, k1, k2):
        lo, hi = sorted((k1, k2))
        a, b = effective_capacitance(c, lo), effective_capacitance(c, hi)
        assert 0 < b <= a <= c

    def test_c_sigma_bare(self):
        p = CpbParams(km_hz=0.0)
        assert c_sigma(p) == pytest.approx(3.31e-15, rel=1e-12)

    def test_c_sigma_junction_only(self):
        assert c_sigma(CpbParams(cg=0.0, co=0.0)) == 1e-15

    def test_c_sigma_with_cutoff(self):
        expected = 1.0 + hand_ceff(0.01) + hand_ceff(2.3)
        assert c_sigma(CpbParams()) * 1e15 == pytest.approx(expected, rel=1e-12)
        assert c_sigma(CpbParams()) > CpbParams().cj

    def test_charging_energy(self):
        p = CpbParams(km_hz=0.0)
        expected = (2 * 1.602176634e-19) ** 2 / (2 * 3.31e-15) / 6.62607015e-34
        assert charging_energy_hz(p) == pytest.approx(expected, rel=1e-12)
        assert charging_energy_hz(REF_CPB) == 19.27e9


class TestParams:
    @pytest.mark.parametrize(
        "kw", [dict(cj=0.0), dict(cg=-1e-18), dict(n_rms=-1.0), dict(gamma_nr=-1.0), dict(eq_hz=0.0)]
    )
    def test_cpb_rejects(self, kw):
        with pytest.raises(ValidationError):
            CpbParams(**kw)

    @pytest.mark.parametrize("alpha", [0.5, 0.3, -1.0])
    def test_flux_rejects_small_alpha(self, alpha):
        with pytest.raises(ValidationError):
            FluxParams(alpha=alpha)

    def test_gamma_value(self):
        assert junction_gamma(0.7) == pytest.approx(math.sqrt(1 - (1 / 1.4) ** 2), rel=1e-15)
        assert junction_gamma(0.7) == pytest.approx(0.6999, abs=1e-4)

    def test_basis_needs_interior_pair(self):
        with pytest.raises(ValidationError):
            ChargeBasis(0, 4)
        with pytest.raises(ValidationError):
            ChargeBasis(-2, 1)
        assert ChargeBasis().dim == 8


class TestCpbHamiltonian:
    def test_structure(self):
        h = cpb_hamiltonian(REF_CPB, ChargeBasis(), 0.0)
        b = ChargeBasis()
        assert h[b.index(0), b.index(0)] == 0.0
        assert np.all(np.diag(h, 1) == -0.5e9)
        assert np.count_nonzero(np.triu(h, 2)) == 0

    def test_degenerate_pair_at_half(self):
        h = cpb_hamiltonian(REF_CPB, ChargeBasis(), 0.5)
        b = ChargeBasis()
        assert h[b.index(0), b.index(0)] == pytest.approx(4.8175e9, rel=1e-14)
        assert h[b.index(1), b.index(1)] == pytest.approx(4.8175e9, rel=1e-14)

    @given(n_g=st.floats(-1, 2), lo=st.integers(-6, -1), hi=st.integers(2, 7))
    def test_matches_elementwise_oracle_and_is_hermitian(self, n_g, lo, hi):
        h = cpb_hamiltonian(REF_CPB, ChargeBasis(lo, hi), n_g)
        assert is_hermitian(h, 1e-12)
        np.testing.assert_allclose(h, cpb_matrix(1e9, 19.27e9, lo, hi, n_g), rtol=1e-13, atol=1e-3)

    @given(n_g=st.floats(0, 1))
    def test_spectrum_symmetric_about_half(self, n_g):
        b = ChargeBasis(-4, 5)  # symmetric about n = 1/2
        w1 = np.linalg.eigvalsh(cpb_hamiltonian(REF_CPB, b, n_g))
        w2 = np.linalg.eigvalsh(cpb_hamiltonian(REF_CPB, b, 1 - n_g))
        np.testing.assert_allclose(np.diff(w1), np.diff(w2), rtol=1e-9, atol=1e-2)

    def test_multilevel_gap_at_half_close_to_ej(self):
        w = np.linalg.eigvalsh(cpb_hamiltonian(REF_CPB, ChargeBasis(), 0.5))
        assert abs((w[1] - w[0]) / 1e9 - 1) < 0.02


class TestCpbFrequency:
    def test_minimum_gap(self):
        assert cpb_transition_frequency(REF_CPB, 0.5) == 1e9

    def test_far_point(self):
        assert cpb_transition_frequency(REF_CPB, 0.0) == pytest.approx(math.hypot(1, 19.27) * 1e9, rel=1e-14)
        assert cpb_transition_frequency(REF_CPB, 0.0) / 1e9 == pytest.approx(19.296, abs=1e-3)

    def test_minimised_at_half(self):
        grid = np.linspace(0, 1, 2001)
        f = cpb_transition_frequency(REF_CPB, grid)
        assert grid[np.argmin(f)] == pytest.approx(0.5)
        np.testing.assert_allclose(f, f[::-1], rtol=1e-14)

    @given(f=st.floats(1.0001e9, 19e9))
    def test_inverse(self, f):
        n_g = cpb_gate_charge_for_frequency(REF_CPB, f)
        assert 0 <= n_g < 0.5
        assert cpb_transition_frequency(REF_CPB, n_g) == pytest.approx(f, rel=1e-10)

    def test_inverse_below_gap(self):
        with pytest.raises(ValidationError):
            cpb_gate_charge_for_frequency(REF_CPB, 0.5e9)


class TestFlux:
    def test_zero_offset(self):
        p = FluxParams()
        h = flux_hamiltonian(p, 0.0)
        assert h[0, 0] == h[1, 1] == 0.0
        assert h[0, 1] == -0.5e9
        assert flux_transition_frequency(p, 0.0) == 1e9

    def test_no_tunnelling(self):
        p = FluxParams(delta_hz=0.0)
        d = 0.01
        expected = 2 * p.gamma * p.ej_hz * 2 * math.pi * d
        assert flux_transition_frequency(p, d) == pytest.approx(expected, rel=1e-14)
        h = flux_hamiltonian(p, d)
        assert h[0, 0] == pytest.approx(-expected / 2, rel=1e-14)

    @given(d=st.floats(-0.1, 0.1))
    def test_traceless_hermitian_gap(self, d):
        p = FluxParams()
        h = flux_hamiltonian(p, d)
        assert is_hermitian(h)
        assert np.trace(h) == pytest.approx(0.0, abs=1e-3)
        w = np.linalg.eigvalsh(h)
        assert w[1] - w[0] == pytest.approx(flux_transition_frequency(p, d), rel=1e-12)

    def test_offset_for_six_ghz_against_bisection(self):
        p = FluxParams()
        want = bisect(lambda x: flux_transition_frequency(p, x) - 6e9, 0.0, 0.1)
        got = flux_offset_for_frequency(p, 6e9)
        assert got == pytest.approx(want, rel=1e-12)
        assert got == pytest.approx(2.69e-3, rel=2e-3)

    def test_asymptotic_slope(self):
        p = FluxParams()
        slope = (flux_transition_frequency(p, 0.1) - flux_transition_frequency(p, 0.09)) / 0.01
        assert slope == pytest.approx(2 * p.gamma * p.ej_hz * 2 * math.pi, rel=1e-4)

    def test_warns_beyond_range(self):
        with pytest.warns(RuntimeWarning):
            flux_hamiltonian(FluxParams(), 0.2)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            flux_hamiltonian(FluxParams(), 0.1)
