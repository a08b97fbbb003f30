"""Decay and dephasing rates, usable efficiency, and analytic side estimates.

Rates are in 1/s (angular where a coherence rate enters a linewidth).  The
linewidth convention throughout is ``2*pi*FWHM = Gamma_1 + 2*Gamma_phi``, so
``Gamma_2 = Gamma_1/2 + Gamma_phi`` and ``FWHM = Gamma_2 / pi``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import constants as sc

from .lz import cpb_excitation_probability, flux_excitation_probability
from .model import (
    E_CHARGE,
    HBAR,
    PHI0,
    CpbParams,
    FluxParams,
    M_TYPICAL,
    ValidationError,
    c_sigma,
    charging_energy_hz,
    cpb_gate_charge_for_frequency,
)

#: Flux-qubit coupling voltage per unit Josephson frequency, V/Hz (1e-7 V per GHz).
NU_PER_HZ = 1e-7 / 1e9
#: Repetition period in units of T1.
REPETITION_T1 = 5


@dataclass(frozen=True)
class EfficiencyReport:
    p_ex: float
    gamma_o: float
    gamma_other: float
    gamma_nr: float
    eta: float
    t1: float
    gamma_phi: float
    fwhm_hz: float
    rep_rate_hz: float

    @property
    def gamma1(self) -> float:
        return self.gamma_o + self.gamma_other + self.gamma_nr

    @property
    def gamma2(self) -> float:
        return self.gamma1 / 2 + self.gamma_phi

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gamma2"] = self.gamma2
        return d


def linewidth_fwhm_hz(gamma1: float, gamma_phi: float) -> float:
    return (gamma1 / 2 + gamma_phi) / math.pi


def _report(p_ex, gamma_o, gamma_other, gamma_nr, gamma_phi) -> EfficiencyReport:
    total = gamma_o + gamma_other + gamma_nr
    if not total > 0:
        raise ValidationError("total decay rate must be > 0")
    t1 = 1.0 / total
    return EfficiencyReport(
        p_ex=p_ex,
        gamma_o=gamma_o,
        gamma_other=gamma_other,
        gamma_nr=gamma_nr,
        eta=p_ex * min(1.0, gamma_o / total),
        t1=t1,
        gamma_phi=gamma_phi,
        fwhm_hz=linewidth_fwhm_hz(total, gamma_phi),
        rep_rate_hz=1.0 / (REPETITION_T1 * t1),
    )


# -- Cooper-pair box ---------------------------------------------------------


def cpb_gamma1(p: CpbParams, c_coupling: float, omega: float) -> float:
    """Radiative decay R C^2 omega^2 / (4 C_sigma) into a line coupled through ``c_coupling``."""
    if not omega > 0:
        raise ValidationError("omega must be > 0")
    return p.r_env * c_coupling**2 * omega**2 / (4 * c_sigma(p))


def cpb_transition_derivatives(p: CpbParams, n_g: float) -> tuple[float, float]:
    """First and second derivative of the angular transition frequency w.r.t. n_g."""
    eq = charging_energy_hz(p)
    x = 1 - 2 * n_g
    f = math.sqrt(p.ej_hz**2 + eq**2 * x**2)
    d1 = -2 * eq**2 * x / f
    d2 = 4 * eq**2 * p.ej_hz**2 / f**3
    return 2 * math.pi * d1, 2 * math.pi * d2


def cpb_gamma_phi(p: CpbParams, n_g: float, approx: bool = False) -> float:
    """Charge-noise dephasing rate (1/s).

    The full form combines first- and second-order sensitivity; ``approx``
    returns ``n_rms * 2 pi E_Q/h``.  Far from the sweet spot the full form
    tends to twice the approximation because d(omega)/d(n_g) -> 2 E_Q/hbar.
    """
    if approx:
        return p.n_rms * 2 * math.pi * charging_energy_hz(p)
    d1, d2 = cpb_transition_derivatives(p, n_g)
    return math.sqrt(p.n_rms**2 * d1**2 + 0.75 * p.n_rms**4 * d2**2)


def cpb_channel_rates(p: CpbParams, omega: float) -> tuple[float, float]:
    """(Gamma_g, Gamma_o) using the effective coupling capacitances."""
    gg = cpb_gamma1(p, p.cg_eff if p.cg > 0 else 0.0, omega)
    go = cpb_gamma1(p, p.co_eff if p.co > 0 else 0.0, omega)
    return gg, go


def usable_efficiency_cpb(
    p: CpbParams, lambda_rate: float, omega: float, dephasing: str = "approx"
) -> EfficiencyReport:
    """Photon-into-output probability for a CPB swept at ``lambda_rate`` emitting at ``omega``.

    ``dephasing`` selects the charge-noise model for the linewidth: ``"approx"``
    (n_rms E_Q / hbar) or ``"full"``, evaluated at the gate charge whose
    transition frequency is ``omega``.
    """
    p_ex = cpb_excitation_probability(p, lambda_rate)
    gg, go = cpb_channel_rates(p, omega)
    if dephasing == "approx":
        gphi = cpb_gamma_phi(p, 0.0, approx=True)
    elif dephasing == "full":
        gphi = cpb_gamma_phi(p, cpb_gate_charge_for_frequency(p, omega / (2 * math.pi)))
    else:
        raise ValidationError(f"unknown dephasing model {dephasing!r}")
    return _report(p_ex, go, gg, p.gamma_nr, gphi)


# -- flux qubit ----------------------------------------------------------------


def flux_coupling_voltage(p: FluxParams) -> float:
    """nu ~ (E_J/h) x 1e-7 V/GHz."""
    return p.ej_hz * NU_PER_HZ


def flux_rates(p: FluxParams, omega: float) -> tuple[float, float]:
    """(Gamma_1,o, Gamma_phi) for the flux qubit in 1/s."""
    if not omega > 0:
        raise ValidationError("omega must be > 0")
    nu = flux_coupling_voltage(p)
    g1o = 2 * omega * p.z_env * (p.co * nu) ** 2 / HBAR
    gphi = p.phi_rms * 2 * math.pi * p.ej_hz * p.gamma
    return g1o, gphi


#: Order-of-magnitude anchor for decay into the flux line.
_GF_REF = dict(rate=1e3, delta_hz=4e9, omega=2 * math.pi * 4e9, ej_hz=250e9, m=M_TYPICAL)


def flux_line_decay(p: FluxParams, omega: float) -> float:
    """Rough decay rate into the flux-bias line, scaling as M^2 E_J^2 Delta^2 / omega.

    Only the scaling is known; the prefactor is pinned to ~1e3 /s at
    Delta/h = 4 GHz, omega = 2 pi x 4 GHz, E_J/h = 250 GHz and M = 0.015 Phi0/mA.
    """
    r = _GF_REF
    return (
        r["rate"]
        * (p.m_coupling / r["m"]) ** 2
        * (p.ej_hz / r["ej_hz"]) ** 2
        * (p.delta_hz / r["delta_hz"]) ** 2
        * (r["omega"] / omega)
    )


def usable_efficiency_flux(
    p: FluxParams, mu_rate: float, omega: float, include_flux_line: bool = False
) -> EfficiencyReport:
    p_ex = flux_excitation_probability(p, mu_rate)
    g1o, gphi = flux_rates(p, omega)
    gf = flux_line_decay(p, omega) if include_flux_line else 0.0
    return _report(p_ex, g1o, gf, p.gamma_nr, gphi)


# -- side estimates -------------------------------------------------------------


def sinc(x):
    """sin(pi x)/(pi x)."""
    return np.sinc(x)


def sweep_pulse_energy(arch: str, params) -> float:
    """Energy scale (J) of one control pulse: (2e)^2/C_g, or E_J + Phi0^2/2M."""
    if arch == "cpb":
        if not params.cg > 0:
            raise ValidationError("C_g must be > 0 for the charge-line estimate")
        return (2 * E_CHARGE) ** 2 / params.cg
    if arch == "flux":
        if not params.m_coupling > 0:
            raise ValidationError("M must be > 0 for the flux-line estimate")
        return params.ej_hz * sc.h + PHI0**2 / (2 * params.m_coupling)
    raise ValidationError(f"unknown architecture {arch!r}")


def spectral_leakage(
    pulse_kind: str,
    arch: str,
    params,
    omega: float,
    gamma_linewidth: float,
    beta_c: float,
    t_r: float,
    period: float | None = None,
) -> float:
    """Photons leaked into the output band omega +/- Gamma by the control pulse.

    Returns ``beta_c * P_l / (hbar omega Gamma)`` with the triangle estimate
    ``P_l = (3 Gamma t_r / 2) P |sinc^2(omega t_r / 2)|^2`` or the trapezoid
    bound ``P_l = 2 Gamma T P |S|^2`` with ``|S| = sinc(omega T/4) sinc(omega t_r/2) / 2``.
    """
    if not (omega > 0 and gamma_linewidth > 0 and t_r > 0):
        raise ValidationError("omega, gamma_linewidth and t_r must be > 0")
    if not 0 <= beta_c <= 1:
        raise ValidationError(f"beta_c must lie in [0, 1], got {beta_c!r}")
    energy = sweep_pulse_energy(arch, params)
    if pulse_kind == "triangle":
        power = energy / t_r
        s = sinc(omega * t_r / 2) ** 2
        p_l = 1.5 * gamma_linewidth * t_r * power * s**2
    elif pulse_kind == "trapezoid":
        if period is None or not period > 0:
            raise ValidationError("trapezoid estimate needs a period > 0")
        power = energy / period
        s = 0.5 * sinc(omega * period / 4) * sinc(omega * t_r / 2)
        p_l = 2 * gamma_linewidth * period * power * s**2
    else:
        raise ValidationError(f"unknown pulse kind {pulse_kind!r}")
    return float(beta_c * p_l / (HBAR * omega * gamma_linewidth))


def thermal_population(f: float, temp: float) -> float:
    """Boltzmann factor exp(-h f / k_B T)."""
    if not f > 0:
        raise ValidationError("f must be > 0")
    if temp <= 0:
        return 0.0
    return math.exp(-sc.h * f / (sc.k * temp))


def protocol_decay_bound(t_r: float, t1: float) -> float:
    """Upper bound 1 - exp(-1.5 t_r / T1) on decay while away from the target point."""
    if not t1 > 0 or t_r < 0:
        raise ValidationError("need t_r >= 0 and t1 > 0")
    return -math.expm1(-1.5 * t_r / t1)
