"""Time-dependent Schroedinger propagation under a pulsed control.

Integration runs in the fixed (diabatic) basis of the supplied Hamiltonian map;
populations are reported in the instantaneous eigenbasis, ordered by ascending
energy.  Hamiltonians are in Hz, so the equation solved is
``d psi/dt = -2 pi i H(chi(t)) psi``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .model import (
    ChargeBasis,
    CpbParams,
    FluxParams,
    ValidationError,
    charging_energy_hz,
    flux_hamiltonian,
)
from .pulses import PulseSegment, PulseShape

TWO_PI = 2 * math.pi


class SolverError(RuntimeError):
    """Integrator failed (step-size underflow or tolerance failure)."""


class DegeneracyError(ValueError):
    """Requested eigenvectors are not uniquely defined."""


@dataclass(frozen=True)
class SolverOptions:
    """``method`` is ``"adaptive"`` (embedded 8(5,3) pair) or ``"rk4"`` (fixed step).

    ``max_step=None`` means a two-hundredth of each segment duration.
    """

    method: str = "adaptive"
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: Optional[float] = None
    n_samples: int = 201

    def __post_init__(self):
        if self.method not in ("adaptive", "rk4"):
            raise ValidationError(f"unknown solver method {self.method!r}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValidationError("solver tolerances must be > 0")
        if self.max_step is not None and not self.max_step > 0:
            raise ValidationError("max_step must be > 0")
        if self.n_samples < 2:
            raise ValidationError("n_samples must be >= 2")


@dataclass
class SimulationResult:
    times: np.ndarray
    chi: np.ndarray
    populations_adiabatic: np.ndarray
    p_excited_final: float
    p_ground_final: float
    leakage_final: float
    norm_drift: float
    psi_final: np.ndarray = field(repr=False)

    @property
    def p_not_excited_final(self) -> float:
        return 1.0 - self.p_excited_final


class AffineHamiltonian:
    """H(chi) = a + chi * b; picklable and cheap to evaluate inside the integrator."""

    def __init__(self, a: np.ndarray, b: np.ndarray):
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)

    def __call__(self, chi: float) -> np.ndarray:
        return self.a + chi * self.b


def cpb_control(p: CpbParams, basis: ChargeBasis = ChargeBasis()) -> AffineHamiltonian:
    """CPB Hamiltonian as a function of chi = n_g - 0.5.

    The n-independent ``E_Q n_g^2`` term is dropped; it only adds a global phase.
    """
    eq = charging_energy_hz(p)
    n = basis.charges.astype(float)
    off = np.full(basis.dim - 1, -p.ej_hz / 2)
    a = np.diag(eq * (n**2 - n)) + np.diag(off, 1) + np.diag(off, -1)
    b = np.diag(-2 * eq * n)
    return AffineHamiltonian(a, b)


def flux_control(p: FluxParams) -> Callable[[float], np.ndarray]:
    """Flux-qubit Hamiltonian as a function of the offset in flux quanta."""
    return partial(flux_hamiltonian, p)


def two_level_control(d_hz: float) -> AffineHamiltonian:
    """Generic crossing ``(chi/2) sigma_z + (d_hz/2) sigma_x`` with chi the detuning in Hz."""
    a = np.array([[0.0, d_hz / 2], [d_hz / 2, 0.0]])
    b = np.array([[0.5, 0.0], [0.0, -0.5]])
    return AffineHamiltonian(a, b)


def eigenstate(h: np.ndarray, k: int = 0) -> np.ndarray:
    _, v = np.linalg.eigh(h)
    return v[:, k].astype(complex)


def _rk4(f, t0: float, t1: float, y0: np.ndarray, max_step: float, t_eval: np.ndarray) -> np.ndarray:
    n = max(1, int(math.ceil((t1 - t0) / max_step - 1e-9)))
    h = (t1 - t0) / n
    out = np.empty((len(t_eval), len(y0)), dtype=complex)
    # sample indices align with step boundaries when possible, else nearest step
    step_of = np.rint((t_eval - t0) / h).astype(int)
    y = y0.copy()
    j = 0
    while j < len(t_eval) and step_of[j] <= 0:
        out[j] = y
        j += 1
    for i in range(n):
        t = t0 + i * h
        k1 = f(t, y)
        k2 = f(t + h / 2, y + h / 2 * k1)
        k3 = f(t + h / 2, y + h / 2 * k2)
        k4 = f(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        while j < len(t_eval) and step_of[j] <= i + 1:
            out[j] = y
            j += 1
    return out


def _integrate_piece(h_of_chi, seg: PulseSegment, psi: np.ndarray, opts: SolverOptions, t_local: np.ndarray):
    def rhs(t, y):
        chi = seg._value(min(max(t, 0.0), seg.t_r))
        return -1j * TWO_PI * (h_of_chi(float(chi)) @ y)

    max_step = opts.max_step if opts.max_step is not None else seg.t_r / 200
    if opts.method == "rk4":
        return _rk4(rhs, 0.0, seg.t_r, psi, max_step, t_local)
    sol = solve_ivp(
        rhs,
        (0.0, seg.t_r),
        psi,
        method="DOP853",
        t_eval=t_local,
        rtol=opts.rel_tol,
        atol=opts.abs_tol,
        max_step=max_step,
    )
    if sol.status != 0:
        raise SolverError(f"integration failed: {sol.message}")
    return sol.y.T


def propagate(
    h_of_chi: Callable[[float], np.ndarray],
    drive,
    psi0: np.ndarray,
    opts: SolverOptions = SolverOptions(),
) -> SimulationResult:
    """Integrate the Schroedinger equation along ``drive`` starting from ``psi0``.

    ``drive`` is a :class:`PulseSegment` or a :class:`CatapultSequence`; the
    integrator restarts at every segment boundary.  ``opts.n_samples`` output
    points are taken per segment.
    """
    psi = np.asarray(psi0, dtype=complex).copy()
    if abs(np.linalg.norm(psi) - 1) > 1e-12:
        raise ValidationError("psi0 must be normalised")
    pieces = drive.pieces
    times, chis, states = [], [], []
    t0 = 0.0
    for k, seg in enumerate(pieces):
        t_local = np.linspace(0.0, seg.t_r, opts.n_samples)
        ys = _integrate_piece(h_of_chi, seg, psi, opts, t_local)
        skip = 1 if k else 0
        times.append(t0 + t_local[skip:])
        chis.append(seg._value(t_local[skip:]))
        states.append(ys[skip:])
        psi = ys[-1]
        t0 += seg.t_r
    times = np.concatenate(times)
    chis = np.concatenate(chis)
    states = np.concatenate(states)

    hs = np.array([h_of_chi(float(c)) for c in chis])
    _, vecs = np.linalg.eigh(hs)
    amps = np.einsum("tij,ti->tj", vecs.conj(), states)
    pops = np.abs(amps) ** 2
    norms = np.linalg.norm(states, axis=1)
    p_g, p_e = float(pops[-1, 0]), float(pops[-1, 1])
    return SimulationResult(
        times=times,
        chi=chis,
        populations_adiabatic=pops,
        p_excited_final=p_e,
        p_ground_final=p_g,
        leakage_final=float(pops[-1, 2:].sum()),
        norm_drift=float(np.max(np.abs(norms - 1.0))),
        psi_final=states[-1],
    )


def diabatic_limit(h_initial: np.ndarray, h_final: np.ndarray, gap_rtol: float = 1e-9) -> float:
    """|<ground of h_initial | first excited of h_final>|^2, the sudden-sweep ceiling."""
    h_initial, h_final = np.asarray(h_initial), np.asarray(h_final)
    if h_initial.shape != h_final.shape:
        raise ValidationError("Hamiltonians must have the same dimension")
    w0, v0 = np.linalg.eigh(h_initial)
    w1, v1 = np.linalg.eigh(h_final)
    for w, label in ((w0, "initial"), (w1, "final")):
        scale = max(np.abs(w).max(), 1.0)
        gaps = np.diff(w[:3])
        if np.any(gaps <= gap_rtol * scale):
            raise DegeneracyError(f"lowest levels of the {label} Hamiltonian are degenerate")
    return float(abs(np.vdot(v1[:, 1], v0[:, 0])) ** 2)


@dataclass
class LeakagePoint:
    t_r: float
    ng_min: float
    shape: str
    p_excited: float = float("nan")
    p_ground: float = float("nan")
    leakage: float = float("nan")
    norm_drift: float = float("nan")
    error: str = ""


def cpb_ng_segment(shape: PulseShape | str, ng_start: float, ng_end: float, t_r: float) -> PulseSegment:
    """Rise expressed in gate charge; exponential rises scale about n_g = 0."""
    return PulseSegment(PulseShape(shape), ng_start - 0.5, ng_end - 0.5, t_r, origin=-0.5)


def simulate_cpb_rise(
    p: CpbParams,
    basis: ChargeBasis,
    shape: PulseShape | str,
    ng_start: float,
    ng_end: float,
    t_r: float,
    opts: SolverOptions = SolverOptions(),
) -> SimulationResult:
    """Start in the ground state at ``ng_start`` and sweep to ``ng_end``."""
    control = cpb_control(p, basis)
    seg = cpb_ng_segment(shape, ng_start, ng_end, t_r)
    psi0 = eigenstate(control(seg.chi_start), 0)
    return propagate(control, seg, psi0, opts)


def _leakage_point(p, basis, shape, t_r, ng_min, opts) -> LeakagePoint:
    pt = LeakagePoint(t_r=t_r, ng_min=ng_min, shape=PulseShape(shape).value)
    try:
        res = simulate_cpb_rise(p, basis, shape, ng_min, 1.0 - ng_min, t_r, opts)
    except (SolverError, ValidationError) as exc:
        pt.error = f"{type(exc).__name__}: {exc}"
        return pt
    pt.p_excited, pt.p_ground = res.p_excited_final, res.p_ground_final
    pt.leakage, pt.norm_drift = res.leakage_final, res.norm_drift
    return pt


def leakage_scan(
    p: CpbParams,
    basis: ChargeBasis = ChargeBasis(),
    shape: PulseShape | str = PulseShape.LINEAR,
    t_r: Sequence[float] | float = 1e-9,
    ng_min: Sequence[float] | float = 0.1,
    opts: SolverOptions = SolverOptions(),
    workers: int = 1,
) -> list[LeakagePoint]:
    """Population left outside the two lowest levels after a symmetric sweep.

    Exactly one of ``t_r`` / ``ng_min`` may be a sequence; the sweep runs from
    ``ng_min`` to ``1 - ng_min``.  Rows come back in grid order; failures are
    recorded in ``LeakagePoint.error`` rather than raised.
    """
    t_grid = np.atleast_1d(np.asarray(t_r, dtype=float))
    ng_grid = np.atleast_1d(np.asarray(ng_min, dtype=float))
    if t_grid.size == 0 or ng_grid.size == 0:
        raise ValidationError("leakage grid is empty")
    if t_grid.size > 1 and ng_grid.size > 1:
        raise ValidationError("scan either t_r or ng_min, not both")
    points = [(float(a), float(b)) for a in t_grid for b in ng_grid]
    job = partial(_leakage_job, p, basis, PulseShape(shape).value, opts)
    return run_ordered(job, points, workers)


def _leakage_job(p, basis, shape, opts, point):
    t_r, ng_min = point
    return _leakage_point(p, basis, shape, t_r, ng_min, opts)


def run_ordered(fn, items, workers: int = 1) -> list:
    """Map ``fn`` over ``items``; results keep input order whatever the worker count."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
