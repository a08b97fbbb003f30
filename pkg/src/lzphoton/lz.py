"""Closed-form Landau-Zener excitation probabilities.

The generic two-level model is ``H/hbar = (beta t / 2) sigma_z + (D / 2) sigma_x``
with ``D`` in rad/s and ``beta`` in rad/s^2.  The asymptotic formula is applied
to finite sweeps; the finite-range correction falls below 1e-3 once the sweep
endpoints sit many gap widths away from the crossing (see the dynamics tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import CpbParams, FluxParams, ValidationError, charging_energy_hz


@dataclass(frozen=True)
class LzTwoLevel:
    d_hz: float
    beta_rate: float

    def __post_init__(self):
        if not self.d_hz >= 0:
            raise ValidationError(f"d_hz must be >= 0, got {self.d_hz!r}")
        if not self.beta_rate > 0:
            raise ValidationError(f"beta_rate must be > 0, got {self.beta_rate!r}")

    @property
    def d_angular(self) -> float:
        return 2 * math.pi * self.d_hz


def lz_exponent(m: LzTwoLevel) -> float:
    return math.pi * m.d_angular**2 / (2 * m.beta_rate)


def lz_probability(m: LzTwoLevel) -> float:
    """Diabatic transition probability exp(-pi D^2 / 2 beta)."""
    return math.exp(-lz_exponent(m))


def adiabaticity_xi(coupling_hz: float, sweep_rate: float) -> float:
    """Sweep heuristic xi = (E_12/hbar)^2 / alpha.

    ``coupling_hz`` is the off-diagonal element E_12/h and ``sweep_rate`` the
    rate alpha (rad/s^2) at which the diabatic energies separate.  The
    transition probability is exp(-2 pi xi).
    """
    if not sweep_rate > 0:
        raise ValidationError("sweep_rate must be > 0")
    return (2 * math.pi * coupling_hz) ** 2 / sweep_rate


def cpb_excitation_probability(p: CpbParams, lambda_rate: float) -> float:
    """Excitation probability for a linear gate-charge sweep at ``lambda_rate`` (1/s).

    Equals ``exp(-pi^2 f_J^2 / (2 f_Q lambda))`` with both energies in Hz.
    """
    if not lambda_rate > 0:
        raise ValidationError(f"lambda_rate must be > 0, got {lambda_rate!r}")
    eq = charging_energy_hz(p)
    return math.exp(-(math.pi**2) * p.ej_hz**2 / (2 * eq * lambda_rate))


def cpb_lz_model(p: CpbParams, lambda_rate: float) -> LzTwoLevel:
    """Two-level parameters equivalent to a CPB sweep: D = 2 pi f_J, beta = 2 (2 pi f_Q) lambda."""
    eq = charging_energy_hz(p)
    return LzTwoLevel(d_hz=p.ej_hz, beta_rate=2 * (2 * math.pi * eq) * lambda_rate)


def flux_excitation_probability(p: FluxParams, mu_rate: float) -> float:
    """Excitation probability ``exp(-pi^2 f_Delta^2 / (gamma f_J mu))``.

    ``mu_rate`` is in rad/s.  Note that propagating :func:`~lzphoton.model.flux_hamiltonian`
    with ``dphi_e = mu t / 2 pi`` gives half this exponent, i.e. the square root
    of this probability (see :func:`flux_lz_model`).
    """
    if not mu_rate > 0:
        raise ValidationError(f"mu_rate must be > 0, got {mu_rate!r}")
    return math.exp(-(math.pi**2) * p.delta_hz**2 / (p.gamma * p.ej_hz * mu_rate))


def flux_lz_model(p: FluxParams, mu_rate: float) -> LzTwoLevel:
    """Two-level parameters of the flux Hamiltonian swept at ``mu_rate``.

    The diagonal splitting grows as ``2 gamma f_J mu t`` (Hz), hence
    ``beta = 4 pi gamma f_J mu``.
    """
    return LzTwoLevel(d_hz=p.delta_hz, beta_rate=4 * math.pi * p.gamma * p.ej_hz * mu_rate)


def cpb_sweep_rate(t_r: float, ng_span: float = 0.8) -> float:
    """Gate-charge rate for a linear sweep of ``ng_span`` in ``t_r``."""
    if not t_r > 0:
        raise ValidationError(f"t_r must be > 0, got {t_r!r}")
    return ng_span / t_r


def flux_sweep_rate(t_r: float, span_phi0: float = 0.2, angular: bool = False) -> float:
    """Flux sweep rate ``mu`` for a linear sweep of ``span_phi0`` flux quanta in ``t_r``.

    With ``angular=True`` this is ``2 pi span / t_r``, the rate implied by
    ``dphi_e = (Phi0 / 2 pi) mu t``.  The default ``span / t_r`` is the
    normalisation under which the published flux-qubit efficiency bands are
    reproduced; it gives a 2*pi larger exponent.
    """
    if not t_r > 0:
        raise ValidationError(f"t_r must be > 0, got {t_r!r}")
    rate = span_phi0 / t_r
    return 2 * math.pi * rate if angular else rate
