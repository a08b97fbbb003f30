"""Device parameter records and Hamiltonians for Cooper-pair-box and flux-qubit sources.

Unit conventions
----------------
* Energies are stored as ordinary frequencies E/h in Hz (``*_hz`` fields).
* Times in seconds, capacitances in farads, rates in 1/s.
* Angular frequencies (rad/s) only appear where an argument is named ``omega``
  and are always formed as ``2*pi*f`` at the call site.
* Hamiltonian matrices returned here are in Hz (E/h).  The propagator multiplies
  by 2*pi once.

See ``docs/units.md`` for the per-formula unit audit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import constants as sc

E_CHARGE = sc.e
H_PLANCK = sc.h
HBAR = sc.hbar
PHI0 = sc.h / (2 * sc.e)

#: Frequency-equivalent transmission-line coefficient, Hz*F (3.2 THz for 1 fF).
BETA_COEFF_CPW = 3.2e12 * 1e-15
#: Mode cutoff for aluminium films, as a frequency.
KM_ALUMINIUM_HZ = 90e9
#: Typical flux-line mutual inductance, 0.015 flux quanta per mA.
M_TYPICAL = 0.015 * PHI0 / 1e-3


class ValidationError(ValueError):
    """Raised when a physical parameter violates its documented invariant."""


@dataclass(frozen=True)
class CpbParams:
    """Cooper-pair-box device description.

    ``eq_hz`` bypasses the capacitance network when set; it exists for
    reproducing simulations that quote the charging energy directly.
    """

    ej_hz: float = 1e9
    cj: float = 1e-15
    cg: float = 10e-18
    co: float = 2.3e-15
    r_env: float = 50.0
    n_rms: float = 0.5e-3
    gamma_nr: float = 1e6
    km_hz: float = KM_ALUMINIUM_HZ
    beta_coeff_hz_f: float = BETA_COEFF_CPW
    eq_hz: Optional[float] = None

    def __post_init__(self):
        if not self.cj > 0:
            raise ValidationError(f"cj must be > 0, got {self.cj!r}")
        for name in ("cg", "co", "ej_hz", "n_rms", "gamma_nr", "km_hz", "r_env"):
            if not getattr(self, name) >= 0:
                raise ValidationError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        if not self.beta_coeff_hz_f > 0:
            raise ValidationError("beta_coeff_hz_f must be > 0")
        if self.eq_hz is not None and not self.eq_hz > 0:
            raise ValidationError(f"eq_hz must be > 0, got {self.eq_hz!r}")

    @classmethod
    def from_energies(cls, ej_hz: float, eq_hz: float, **kwargs) -> "CpbParams":
        return cls(ej_hz=ej_hz, eq_hz=eq_hz, **kwargs)

    @property
    def cg_eff(self) -> float:
        return effective_capacitance(self.cg, self.km_hz, self.beta_coeff_hz_f)

    @property
    def co_eff(self) -> float:
        return effective_capacitance(self.co, self.km_hz, self.beta_coeff_hz_f)

    @property
    def eq(self) -> float:
        """Charging energy E_Q/h in Hz."""
        return charging_energy_hz(self)


@dataclass(frozen=True)
class FluxParams:
    """Three-junction flux qubit in its two-level approximation near half a flux quantum."""

    ej_hz: float = 250e9
    delta_hz: float = 1e9
    alpha: float = 0.7
    co: float = 2.5e-15
    m_coupling: float = M_TYPICAL
    phi_rms: float = 1e-5
    gamma_nr: float = 2e6
    z_env: float = 50.0
    sweep_halfrange_phi0: float = 0.1

    def __post_init__(self):
        if not self.alpha > 0.5:
            raise ValidationError(f"alpha must be > 0.5 for a real gamma, got {self.alpha!r}")
        for name in ("ej_hz", "delta_hz", "co", "m_coupling", "phi_rms", "gamma_nr", "z_env"):
            if not getattr(self, name) >= 0:
                raise ValidationError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        if not self.sweep_halfrange_phi0 > 0:
            raise ValidationError("sweep_halfrange_phi0 must be > 0")

    @property
    def gamma(self) -> float:
        return junction_gamma(self.alpha)


@dataclass(frozen=True)
class ChargeBasis:
    """Truncated charge basis n_min..n_max (inclusive)."""

    n_min: int = -3
    n_max: int = 4

    def __post_init__(self):
        if not (self.n_min < 0 and self.n_max > 1):
            raise ValidationError(
                f"basis [{self.n_min}, {self.n_max}] must keep the n=0,1 pair interior"
            )

    @property
    def dim(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def charges(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def index(self, n: int) -> int:
        return n - self.n_min


def junction_gamma(alpha: float) -> float:
    if not alpha > 0.5:
        raise ValidationError(f"alpha must be > 0.5, got {alpha!r}")
    return math.sqrt(1.0 - (1.0 / (2.0 * alpha)) ** 2)


def effective_capacitance(c: float, km_hz: float, beta_coeff: float = BETA_COEFF_CPW) -> float:
    """Coupling capacitance reduced by the transmission-line mode cutoff.

    The line parameter is given as its frequency equivalent ``beta_coeff / c``
    so the result is ``c / (1 + km_hz * c / beta_coeff)``.
    """
    if not c > 0:
        raise ValidationError(f"capacitance must be > 0, got {c!r}")
    if not km_hz >= 0:
        raise ValidationError(f"km_hz must be >= 0, got {km_hz!r}")
    beta_hz = beta_coeff / c
    return c / (1.0 + km_hz / beta_hz)


def c_sigma(p: CpbParams) -> float:
    """Total island capacitance C_J + C_g,eff + C_o,eff (F)."""
    total = p.cj
    for c in (p.cg, p.co):
        if c > 0:
            total += effective_capacitance(c, p.km_hz, p.beta_coeff_hz_f)
    return total


def charging_energy_hz(p: CpbParams) -> float:
    """E_Q/h = (2e)^2 / (2 C_sigma h), unless overridden by ``p.eq_hz``."""
    if p.eq_hz is not None:
        return p.eq_hz
    return (2 * E_CHARGE) ** 2 / (2 * c_sigma(p)) / H_PLANCK


def is_hermitian(m: np.ndarray, rtol: float = 1e-12) -> bool:
    m = np.asarray(m)
    scale = max(np.abs(m).max(), 1.0)
    return bool(np.abs(m - m.conj().T).max() <= rtol * scale)


def cpb_hamiltonian(p: CpbParams, basis: ChargeBasis, n_g: float) -> np.ndarray:
    """Charge-basis CPB Hamiltonian in Hz.

    Diagonal ``E_Q (n - n_g)^2``, nearest-neighbour tunnelling ``-E_J/2``.
    """
    if basis.dim < 2:
        raise ValidationError("basis needs at least two charge states")
    eq = charging_energy_hz(p)
    n = basis.charges
    h = np.diag(eq * (n - n_g) ** 2)
    off = np.full(basis.dim - 1, -p.ej_hz / 2)
    h += np.diag(off, 1) + np.diag(off, -1)
    return h


def cpb_transition_frequency(p: CpbParams, n_g):
    """Two-level transition frequency sqrt(E_J^2 + E_Q^2 (1 - 2 n_g)^2), in Hz."""
    eq = charging_energy_hz(p)
    n_g = np.asarray(n_g, dtype=float)
    f = np.sqrt(p.ej_hz**2 + eq**2 * (1 - 2 * n_g) ** 2)
    return f if f.ndim else float(f)


def cpb_gate_charge_for_frequency(p: CpbParams, f_hz: float) -> float:
    """Gate charge on the n_g < 0.5 branch where the two-level gap equals ``f_hz``."""
    eq = charging_energy_hz(p)
    if f_hz < p.ej_hz:
        raise ValidationError(f"{f_hz} Hz is below the minimum gap {p.ej_hz} Hz")
    return 0.5 - math.sqrt(f_hz**2 - p.ej_hz**2) / (2 * eq)


def _warn_range(p: FluxParams, dphi_e) -> None:
    if np.any(np.abs(dphi_e) > p.sweep_halfrange_phi0):
        warnings.warn(
            f"flux offset beyond the +/-{p.sweep_halfrange_phi0} Phi0 single-step range",
            RuntimeWarning,
            stacklevel=3,
        )


def flux_bias_energy_hz(p: FluxParams, dphi_e):
    """Diagonal bias gamma * E_J * 2*pi*dphi_e (Hz); dphi_e in flux quanta."""
    return p.gamma * p.ej_hz * 2 * np.pi * np.asarray(dphi_e, dtype=float)


def flux_hamiltonian(p: FluxParams, dphi_e: float) -> np.ndarray:
    """2x2 flux-qubit Hamiltonian in Hz, ``-eps sigma_z - (Delta/2) sigma_x``."""
    _warn_range(p, dphi_e)
    eps = float(flux_bias_energy_hz(p, dphi_e))
    return np.array([[-eps, -p.delta_hz / 2], [-p.delta_hz / 2, eps]])


def flux_transition_frequency(p: FluxParams, dphi_e):
    """Gap sqrt((2 gamma E_J 2 pi dphi_e)^2 + Delta^2), in Hz."""
    _warn_range(p, dphi_e)
    f = np.sqrt((2 * flux_bias_energy_hz(p, dphi_e)) ** 2 + p.delta_hz**2)
    return f if np.ndim(f) else float(f)


def flux_offset_for_frequency(p: FluxParams, f_hz: float) -> float:
    """Positive flux offset (in flux quanta) at which the gap equals ``f_hz``."""
    if f_hz < p.delta_hz:
        raise ValidationError(f"{f_hz} Hz is below the tunnel splitting {p.delta_hz} Hz")
    return math.sqrt(f_hz**2 - p.delta_hz**2) / (2 * p.gamma * p.ej_hz * 2 * math.pi)

