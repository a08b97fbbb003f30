"""Constrained maximisation of usable efficiency.

The search is a logarithmic grid scan followed by golden-section refinement
of the best bracket, in log coordinates.  Every evaluated point lands in the
trace with its feasibility flag; the returned optimum is the best feasible
evaluated point, ties broken toward smaller C_o.  Nothing here is random, so
identical problems give bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

from .dynamics import run_ordered
from .lz import cpb_sweep_rate, flux_sweep_rate
from .model import CpbParams, FluxParams, ValidationError
from .rates import EfficiencyReport, usable_efficiency_cpb, usable_efficiency_flux

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
#: Relative tolerance applied when checking constraints.
FEAS_RTOL = 1e-9


@dataclass(frozen=True)
class OptimizationProblem:
    """What to optimise and under which limits.

    ``linewidth_max_hz`` caps the coherence decay: ``Gamma_2 <= 2 pi * linewidth_max_hz``.
    For the CPB it may be left ``None``, in which case the cap becomes
    ``FWHM <= (1 + linewidth_slack) * min FWHM`` over the C_o range (subject to
    the T1 cap).
    """

    architecture: str
    params: Union[CpbParams, FluxParams]
    t_r: float
    t1_max: float = 200e-9
    linewidth_max_hz: Optional[float] = None
    linewidth_slack: float = 0.25
    co_bounds: tuple[float, float] = (0.1e-15, 50e-15)
    ej_bounds_hz: tuple[float, float] = (1e9, 250e9)
    emission_hz: float = 6e9
    ng_span: float = 0.8
    flux_span_phi0: float = 0.2
    flux_mu_angular: bool = False
    dephasing: str = "approx"
    n_grid: int = 48
    n_golden: int = 40
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "co_bounds", tuple(float(x) for x in self.co_bounds))
        object.__setattr__(self, "ej_bounds_hz", tuple(float(x) for x in self.ej_bounds_hz))
        if self.architecture not in ("cpb", "flux"):
            raise ValidationError(f"unknown architecture {self.architecture!r}")
        expected = CpbParams if self.architecture == "cpb" else FluxParams
        if not isinstance(self.params, expected):
            raise ValidationError(f"{self.architecture} problem needs {expected.__name__}")
        if not self.t_r > 0:
            raise ValidationError(f"t_r must be > 0, got {self.t_r!r}")
        if not self.t1_max > 0:
            raise ValidationError("t1_max must be > 0")
        for name in ("co_bounds", "ej_bounds_hz"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ValidationError(f"{name} must satisfy 0 < lo <= hi, got {(lo, hi)}")
        if self.linewidth_max_hz is not None and not self.linewidth_max_hz > 0:
            raise ValidationError("linewidth_max_hz must be > 0")
        if self.architecture == "flux" and self.linewidth_max_hz is None:
            raise ValidationError("flux problems need linewidth_max_hz")
        if not self.linewidth_slack >= 0:
            raise ValidationError("linewidth_slack must be >= 0")
        if not self.emission_hz > 0:
            raise ValidationError("emission_hz must be > 0")
        if self.n_grid < 3 or self.n_golden < 0:
            raise ValidationError("need n_grid >= 3 and n_golden >= 0")

    @property
    def omega(self) -> float:
        return 2 * math.pi * self.emission_hz

    @property
    def sweep_rate(self) -> float:
        if self.architecture == "cpb":
            return cpb_sweep_rate(self.t_r, self.ng_span)
        return flux_sweep_rate(self.t_r, self.flux_span_phi0, angular=self.flux_mu_angular)


@dataclass(frozen=True)
class TracePoint:
    co: float
    ej_hz: float
    eta: float
    t1: float
    fwhm_hz: float
    gamma2: float
    feasible: bool


@dataclass
class OptimizationResult:
    status: str
    problem: OptimizationProblem
    params: Optional[Union[CpbParams, FluxParams]] = None
    report: Optional[EfficiencyReport] = None
    slack: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    linewidth_cap: Optional[dict] = None

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"

    def summary(self) -> dict:
        out = {"status": self.status, "slack": dict(self.slack), "linewidth_cap": self.linewidth_cap}
        if self.params is not None:
            out["co"] = self.params.co
            out["ej_hz"] = self.params.ej_hz
            out["report"] = self.report.to_dict()
        return out


# -- evaluation -----------------------------------------------------------------


def _with(prob: OptimizationProblem, co: float, ej_hz: Optional[float] = None):
    if ej_hz is None:
        return replace(prob.params, co=co)
    return replace(prob.params, co=co, ej_hz=ej_hz)


def evaluate(prob: OptimizationProblem, co: float, ej_hz: Optional[float] = None) -> EfficiencyReport:
    p = _with(prob, co, ej_hz)
    if prob.architecture == "cpb":
        return usable_efficiency_cpb(p, prob.sweep_rate, prob.omega, dephasing=prob.dephasing)
    return usable_efficiency_flux(p, prob.sweep_rate, prob.omega)


def _slack(prob: OptimizationProblem, rep: EfficiencyReport, cap: dict) -> dict:
    """Relative constraint slacks; negative means violated."""
    s = {"t1": 1.0 - rep.t1 / prob.t1_max}
    if cap["kind"] == "gamma2":
        s["linewidth"] = 1.0 - rep.gamma2 / cap["value"]
    else:
        s["linewidth"] = 1.0 - rep.fwhm_hz / cap["value"]
    return s


def _is_feasible(slack: dict) -> bool:
    return all(v >= -FEAS_RTOL for v in slack.values())


def golden_section(fn: Callable[[float], float], lo: float, hi: float, n_iter: int):
    """Maximise ``fn`` on [lo, hi]; returns every (x, f(x)) evaluated, in order."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    evals = [(c, fc), (d, fd)]
    for _ in range(n_iter):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
            evals.append((c, fc))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
            evals.append((d, fd))
    return evals


def _log_grid(lo: float, hi: float, n: int) -> list[float]:
    if lo == hi:
        return [lo]
    a, b = math.log(lo), math.log(hi)
    return [math.exp(a + (b - a) * k / (n - 1)) for k in range(n)]


def _maximise_1d(score: Callable[[float], float], lo: float, hi: float, n_grid: int, n_golden: int):
    """Grid + golden-section on log(x); returns all (x, score) pairs evaluated."""
    xs = _log_grid(lo, hi, n_grid)
    evals = [(x, score(x)) for x in xs]
    if len(xs) < 3:
        return evals
    k = max(range(len(xs)), key=lambda i: (evals[i][1], -i))
    a, b = math.log(xs[max(k - 1, 0)]), math.log(xs[min(k + 1, len(xs) - 1)])
    gs = golden_section(lambda u: score(math.exp(u)), a, b, n_golden)
    evals.extend((math.exp(u), f) for u, f in gs)
    return evals


def _penalised(eta: float, slack: dict) -> float:
    worst = min(0.0, min(slack.values()))
    return eta + 10.0 * worst if worst < -FEAS_RTOL else eta


def _pick_best(points: Sequence[TracePoint]) -> Optional[TracePoint]:
    feas = [q for q in points if q.feasible]
    if not feas:
        return None
    return max(feas, key=lambda q: (q.eta, -q.co, -q.ej_hz))


# -- linewidth caps ---------------------------------------------------------------


def cpb_min_fwhm(prob: OptimizationProblem) -> float:
    """Smallest FWHM over the C_o range among points meeting the T1 cap."""
    def score(co):
        rep = evaluate(prob, co)
        t1_slack = 1.0 - rep.t1 / prob.t1_max
        return -rep.fwhm_hz + (1e3 * rep.fwhm_hz * t1_slack if t1_slack < 0 else 0.0)

    evals = _maximise_1d(score, *prob.co_bounds, prob.n_grid, prob.n_golden)
    ok = []
    for co, _ in evals:
        rep = evaluate(prob, co)
        if rep.t1 <= prob.t1_max * (1 + FEAS_RTOL):
            ok.append(rep.fwhm_hz)
    return min(ok) if ok else math.inf


def flux_min_linewidth(prob: OptimizationProblem, ej_hz: Optional[float] = None) -> float:
    """Smallest Gamma_2 / 2 pi (Hz) at fixed E_J subject to the T1 cap.

    Gamma_phi is independent of C_o and Gamma_1 grows with it, so the minimum
    sits where T1 equals its cap (or at the lower C_o bound).
    """
    ej = prob.params.ej_hz if ej_hz is None else ej_hz

    def score(co):
        rep = evaluate(prob, co, ej)
        t1_slack = 1.0 - rep.t1 / prob.t1_max
        return -rep.gamma2 + (1e3 * rep.gamma2 * t1_slack if t1_slack < 0 else 0.0)

    evals = _maximise_1d(score, *prob.co_bounds, prob.n_grid, prob.n_golden)
    ok = []
    for co, _ in evals:
        rep = evaluate(prob, co, ej)
        if rep.t1 <= prob.t1_max * (1 + FEAS_RTOL):
            ok.append(rep.gamma2)
    return min(ok) / (2 * math.pi) if ok else math.inf


def linewidth_cap(prob: OptimizationProblem) -> dict:
    if prob.linewidth_max_hz is not None:
        return {"kind": "gamma2", "value": 2 * math.pi * prob.linewidth_max_hz}
    fmin = cpb_min_fwhm(prob)
    return {"kind": "fwhm", "value": (1 + prob.linewidth_slack) * fmin, "min_fwhm_hz": fmin}


# -- optimisers ----------------------------------------------------------------------


def _scan_co(prob: OptimizationProblem, cap: dict, ej_hz: Optional[float]) -> list[TracePoint]:
    trace: list[TracePoint] = []

    def record(co):
        rep = evaluate(prob, co, ej_hz)
        sl = _slack(prob, rep, cap)
        ej = prob.params.ej_hz if ej_hz is None else ej_hz
        trace.append(TracePoint(co, ej, rep.eta, rep.t1, rep.fwhm_hz, rep.gamma2, _is_feasible(sl)))
        return _penalised(rep.eta, sl)

    _maximise_1d(record, *prob.co_bounds, prob.n_grid, prob.n_golden)
    return trace


def _finish(prob: OptimizationProblem, cap: dict, trace: list[TracePoint]) -> OptimizationResult:
    best = _pick_best(trace)
    if best is None:
        return OptimizationResult("infeasible", prob, trace=trace, linewidth_cap=cap)
    ej = best.ej_hz if prob.architecture == "flux" else None
    params = _with(prob, best.co, ej)
    rep = evaluate(prob, best.co, ej)
    return OptimizationResult("optimal", prob, params, rep, _slack(prob, rep, cap), trace, cap)


def optimize_cpb(prob: OptimizationProblem) -> OptimizationResult:
    """Best feasible C_o for a CPB swept over ``ng_span`` in ``t_r``."""
    if prob.architecture != "cpb":
        raise ValidationError("optimize_cpb needs a cpb problem")
    cap = linewidth_cap(prob)
    return _finish(prob, cap, _scan_co(prob, cap, None))


def _flux_inner(args) -> list[TracePoint]:
    prob, cap, ej = args
    return _scan_co(prob, cap, ej)


def optimize_flux(prob: OptimizationProblem) -> OptimizationResult:
    """Best feasible (C_o, E_J): an inner C_o search nested in an outer E_J search."""
    if prob.architecture != "flux":
        raise ValidationError("optimize_flux needs a flux problem")
    cap = linewidth_cap(prob)
    trace: list[TracePoint] = []
    ejs = _log_grid(*prob.ej_bounds_hz, prob.n_grid)
    inner = run_ordered(_flux_inner, [(prob, cap, ej) for ej in ejs], prob.workers)
    outer = []
    for chunk in inner:
        trace.extend(chunk)
        b = _pick_best(chunk)
        outer.append(b.eta if b is not None else -math.inf)

    if len(ejs) >= 3:
        k = max(range(len(ejs)), key=lambda i: (outer[i], -i))
        if math.isfinite(outer[k]):
            a, b = math.log(ejs[max(k - 1, 0)]), math.log(ejs[min(k + 1, len(ejs) - 1)])

            def score(u):
                chunk = _scan_co(prob, cap, math.exp(u))
                trace.extend(chunk)
                best = _pick_best(chunk)
                return best.eta if best is not None else -math.inf

            golden_section(score, a, b, prob.n_golden // 2)
    return _finish(prob, cap, trace)


def optimize(prob: OptimizationProblem) -> OptimizationResult:
    return optimize_cpb(prob) if prob.architecture == "cpb" else optimize_flux(prob)


# -- envelopes and sweeps --------------------------------------------------------------


@dataclass(frozen=True)
class Envelope:
    eta_nominal: float
    eta_min: float
    eta_max: float
    rel_err: float
    points: tuple  # (co, ej_hz, eta, feasible)

    @property
    def width(self) -> float:
        return self.eta_max - self.eta_min

    def to_dict(self) -> dict:
        d = asdict(self)
        d["width"] = self.width
        return d


def fabrication_envelope(result: OptimizationResult, rel_err: float = 0.10) -> Envelope:
    """Efficiency spread over a +/-``rel_err`` box in (C_o, E_J) around the optimum.

    Evaluates the four corners, the four axis midpoints and the centre without
    re-optimising; each point carries its re-checked feasibility.
    """
    if not result.feasible:
        raise ValidationError("fabrication_envelope needs a feasible optimisation result")
    if not 0 <= rel_err < 1:
        raise ValidationError("rel_err must lie in [0, 1)")
    prob, p = result.problem, result.params
    cap = result.linewidth_cap
    pts = []
    for sc_ in (-1, 0, 1):
        for se in (-1, 0, 1):
            co = p.co * (1 + sc_ * rel_err)
            ej = p.ej_hz * (1 + se * rel_err)
            rep = evaluate(prob, co, ej)
            pts.append((co, ej, rep.eta, _is_feasible(_slack(prob, rep, cap))))
    etas = [q[2] for q in pts]
    return Envelope(result.report.eta, min(etas), max(etas), rel_err, tuple(pts))


def _optimize_at(args):
    prob, t_r = args
    return optimize(replace(prob, t_r=t_r, workers=1))


def risetime_sweep(prob: OptimizationProblem, t_r_grid: Sequence[float], workers: Optional[int] = None):
    """Independent optimisation at each rise time, in grid order."""
    grid = list(t_r_grid)
    if not grid:
        raise ValidationError("rise-time grid is empty")
    return run_ordered(_optimize_at, [(prob, t) for t in grid], prob.workers if workers is None else workers)
