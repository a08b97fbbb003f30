"""Independent reference implementations used only by the tests.

Nothing here imports the package's numerics, so agreement between an oracle
and the library is a genuine two-route check.
"""

from __future__ import annotations

import math

import numpy as np

# fourth-order commutator-free Magnus nodes and weights
_C1, _C2 = 0.5 - math.sqrt(3) / 6, 0.5 + math.sqrt(3) / 6
_A1, _A2 = 0.25 - math.sqrt(3) / 6, 0.25 + math.sqrt(3) / 6


def _expmh(h: np.ndarray, dt: float) -> np.ndarray:
    """exp(-2 pi i dt h) for Hermitian h in Hz."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-2j * math.pi * dt * w)) @ v.conj().T


def magnus4(h_of_t, t0: float, t1: float, psi0: np.ndarray, n_steps: int) -> np.ndarray:
    """Commutator-free fourth-order Magnus propagation of d psi/dt = -2 pi i H(t) psi."""
    psi = np.asarray(psi0, dtype=complex).copy()
    dt = (t1 - t0) / n_steps
    for k in range(n_steps):
        t = t0 + k * dt
        h1, h2 = h_of_t(t + _C1 * dt), h_of_t(t + _C2 * dt)
        psi = _expmh(_A2 * h1 + _A1 * h2, dt) @ psi
        psi = _expmh(_A1 * h1 + _A2 * h2, dt) @ psi
    return psi


def cpb_matrix(ej_hz: float, eq_hz: float, n_min: int, n_max: int, n_g: float) -> np.ndarray:
    """Charge-basis CPB Hamiltonian written out element by element (Hz)."""
    n = list(range(n_min, n_max + 1))
    h = np.zeros((len(n), len(n)))
    for i, ni in enumerate(n):
        h[i, i] = eq_hz * (ni - n_g) ** 2
        if i + 1 < len(n):
            h[i, i + 1] = h[i + 1, i] = -ej_hz / 2
    return h


def bisect(fn, lo: float, hi: float, tol: float = 1e-15, max_iter: int = 400) -> float:
    flo = fn(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def central_diff(fn, x: float, h: float) -> float:
    return (fn(x + h) - fn(x - h)) / (2 * h)


def second_diff(fn, x: float, h: float) -> float:
    return (fn(x + h) - 2 * fn(x) + fn(x - h)) / h**2
