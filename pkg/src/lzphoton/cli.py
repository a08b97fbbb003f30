"""Command-line entry point: ``lzphoton <command> --config run.yaml --out DIR``.

Every run writes into one directory: ``config.yaml`` (the resolved config),
CSV tables and a ``summary.json`` that embeds the config so the run can be
replayed.  Exit codes: 0 success, 2 validation, 3 solver, 4 infeasible.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, config_from_dict, dump_config, load_config
from .dynamics import (
    SolverError,
    cpb_control,
    cpb_ng_segment,
    diabatic_limit,
    eigenstate,
    flux_control,
    leakage_scan,
    propagate,
)
from .io import write_csv, write_json
from .lz import cpb_excitation_probability
from .model import ValidationError
from .optimize import OptimizationProblem, fabrication_envelope, optimize, risetime_sweep
from .pulses import PulseSegment, PulseShape, catapult, effective_rise_time, segment_bounds, trajectory
from .rates import (
    protocol_decay_bound,
    spectral_leakage,
    thermal_population,
    usable_efficiency_cpb,
    usable_efficiency_flux,
)

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_INFEASIBLE = 0, 2, 3, 4
COMMANDS = ("simulate", "sweep", "optimize", "catapult", "leakage", "spectrum")


class Infeasible(Exception):
    pass


# -- helpers -------------------------------------------------------------------


def _to_chi(cfg: RunConfig, value: float) -> float:
    # CPB pulse endpoints are given as n_g; the crossing sits at n_g = 1/2
    return value - 0.5 if cfg.architecture == "cpb" else value


def _from_chi(cfg: RunConfig, chi):
    return np.asarray(chi) + 0.5 if cfg.architecture == "cpb" else np.asarray(chi)


def _control(cfg: RunConfig):
    p = cfg.params()
    if cfg.architecture == "cpb":
        return cpb_control(p, cfg.charge_basis())
    return flux_control(p)


def _default_chi0(cfg: RunConfig) -> float:
    if cfg.pulse.chi_0 is not None:
        return cfg.pulse.chi_0
    if cfg.architecture == "cpb":
        return cfg.optimize.ng_span
    return 2 * cfg.params().sweep_halfrange_phi0


def build_drive(cfg: RunConfig, t_r: float | None = None, shape: str | None = None):
    pc = cfg.pulse
    t_r = pc.t_r if t_r is None else t_r
    shape = pc.shape if shape is None else shape
    if pc.kind == "catapult":
        return catapult(_to_chi(cfg, pc.start), _to_chi(cfg, pc.end), _default_chi0(cfg), t_r, shape, pc.rho)
    if cfg.architecture == "cpb":
        return cpb_ng_segment(shape, pc.start, pc.end, t_r)
    return PulseSegment(PulseShape(shape), pc.start, pc.end, t_r)


def _problem(cfg: RunConfig, t_r: float | None = None, workers: int = 1) -> OptimizationProblem:
    oc = cfg.optimize
    return OptimizationProblem(
        architecture=cfg.architecture,
        params=cfg.params(),
        t_r=cfg.pulse.t_r if t_r is None else t_r,
        t1_max=oc.t1_max,
        linewidth_max_hz=oc.linewidth_max_hz,
        linewidth_slack=oc.linewidth_slack,
        co_bounds=tuple(oc.co_bounds),
        ej_bounds_hz=tuple(oc.ej_bounds_hz),
        emission_hz=oc.emission_hz,
        ng_span=oc.ng_span,
        flux_span_phi0=oc.flux_span_phi0,
        flux_mu_angular=oc.flux_mu_angular,
        dephasing=oc.dephasing,
        n_grid=oc.n_grid,
        n_golden=oc.n_golden,
        workers=workers,
    )


def _summary(cfg: RunConfig, command: str, args, **payload) -> dict:
    return {"command": command, "version": __version__, "seed": args.seed, **payload, "config": cfg.to_dict()}


def _trace_row(q) -> tuple:
    return (q.co, q.ej_hz, q.eta, q.t1, q.fwhm_hz, q.gamma2, q.feasible)


def _emit(out: Path, cfg: RunConfig, name: str, header, rows) -> None:
    if "csv" in cfg.output.formats:
        write_csv(out / name, header, rows)


def _emit_json(out: Path, cfg: RunConfig, payload: dict) -> None:
    if "json" in cfg.output.formats:
        write_json(out / "summary.json", payload)


# -- commands -----------------------------------------------------------------------


def cmd_simulate(cfg: RunConfig, out: Path, args) -> int:
    """Propagate one pulse and write the population time series."""
    h = _control(cfg)
    drive = build_drive(cfg)
    psi0 = eigenstate(h(drive.pieces[0].chi_start), 0)
    res = propagate(h, drive, psi0, cfg.solver_options())
    ctrl = _from_chi(cfg, res.chi)
    pops = res.populations_adiabatic
    rows = [
        (t, c, u, g, e, max(0.0, float(pops[i, 2:].sum())))
        for i, (t, c, u, g, e) in enumerate(zip(res.times, res.chi, ctrl, pops[:, 0], pops[:, 1]))
    ]
    _emit(out, cfg, "timeseries.csv", ["t", "chi", "control", "p_ground", "p_excited", "leakage"], rows)
    payload = dict(
        p_excited_final=res.p_excited_final,
        p_ground_final=res.p_ground_final,
        leakage_final=res.leakage_final,
        norm_drift=res.norm_drift,
        diabatic_limit=diabatic_limit(h(drive.pieces[0].chi_start), h(drive.pieces[-1].chi_end)),
        duration=float(segment_bounds(drive)[-1]),
    )
    if cfg.architecture == "cpb" and cfg.pulse.kind == "rise" and cfg.pulse.shape == "linear":
        lam = abs(cfg.pulse.end - cfg.pulse.start) / cfg.pulse.t_r
        payload["lz_prediction"] = cpb_excitation_probability(cfg.params(), lam)
    _emit_json(out, cfg, _summary(cfg, "simulate", args, **payload))
    return EXIT_OK


def _dynamics_rows(cfg: RunConfig, workers: int):
    if cfg.architecture != "cpb":
        raise ValidationError("dynamics sweeps are implemented for architecture cpb")
    sw, pc = cfg.sweep, cfg.pulse
    p, basis, opts = cfg.params(), cfg.charge_basis(), cfg.solver_options()
    grid = sw.grid()
    if abs(pc.start + pc.end - 1.0) > 1e-12:
        raise ValidationError("dynamics sweeps need a sweep symmetric about n_g = 0.5 (start + end = 1)")
    points = []
    if sw.axis == "t_r":
        for shape in sw.shapes or [pc.shape]:
            points += leakage_scan(p, basis, shape, grid, pc.start, opts, workers)
    elif sw.axis == "ng_min":
        points = leakage_scan(p, basis, pc.shape, pc.t_r, grid, opts, workers)
    else:
        for shape in grid:
            points += leakage_scan(p, basis, shape, pc.t_r, pc.start, opts, workers)
    rows = []
    for q in points:
        t_eff = math.nan
        if not q.error:
            t_eff = effective_rise_time(cpb_ng_segment(q.shape, q.ng_min, 1.0 - q.ng_min, q.t_r), 0.0)
        rows.append((q.shape, q.t_r, t_eff, q.ng_min, q.p_excited, q.p_ground, q.leakage, q.norm_drift, q.error))
    header = ["shape", "t_r", "t_r_eff", "ng_min", "p_excited", "p_ground", "leakage", "norm_drift", "error"]
    return header, rows


def cmd_sweep(cfg: RunConfig, out: Path, args) -> int:
    """Scan rise time, sweep range or pulse shape (dynamics or optimisation)."""
    if cfg.sweep.mode == "optimize":
        if cfg.sweep.axis != "t_r":
            raise ValidationError("optimize sweeps run over sweep.axis = t_r")
        results = risetime_sweep(_problem(cfg), cfg.sweep.grid(), workers=args.threads)
        header = ["t_r", "status", "co", "ej_hz", "eta", "t1", "fwhm_hz", "rep_rate_hz"]
        rows = []
        for t_r, r in zip(cfg.sweep.grid(), results):
            if r.feasible:
                rep = r.report
                rows.append((t_r, r.status, r.params.co, r.params.ej_hz, rep.eta, rep.t1, rep.fwhm_hz, rep.rep_rate_hz))
            else:
                rows.append((t_r, r.status) + (math.nan,) * 6)
        _emit(out, cfg, "sweep.csv", header, rows)
        n_bad = sum(not r.feasible for r in results)
        _emit_json(out, cfg, _summary(cfg, "sweep", args, rows=len(rows), infeasible=n_bad))
        return EXIT_INFEASIBLE if n_bad else EXIT_OK
    header, rows = _dynamics_rows(cfg, args.threads)
    _emit(out, cfg, "sweep.csv", header, rows)
    errors = [r[-1] for r in rows if r[-1]]
    _emit_json(out, cfg, _summary(cfg, "sweep", args, rows=len(rows), errors=errors))
    return EXIT_SOLVER if errors else EXIT_OK


def cmd_leakage(cfg: RunConfig, out: Path, args) -> int:
    """Population left outside the two lowest levels after a sweep."""
    if cfg.sweep.values is None and cfg.sweep.log_range is None:
        cfg = replace(cfg, sweep=replace(cfg.sweep, axis="t_r", values=[cfg.pulse.t_r]))
    header, rows = _dynamics_rows(cfg, args.threads)
    _emit(out, cfg, "leakage.csv", header, rows)
    errors = [r[-1] for r in rows if r[-1]]
    leak = [r[6] for r in rows if not r[-1]]
    _emit_json(
        out, cfg, _summary(cfg, "leakage", args, max_leakage=max(leak) if leak else None, errors=errors)
    )
    return EXIT_SOLVER if errors else EXIT_OK


def cmd_optimize(cfg: RunConfig, out: Path, args) -> int:
    """Maximise usable efficiency under the T1 and linewidth caps."""
    result = optimize(_problem(cfg, workers=args.threads))
    tr_header = ["co", "ej_hz", "eta", "t1", "fwhm_hz", "gamma2", "feasible"]
    _emit(out, cfg, "trace.csv", tr_header, [_trace_row(q) for q in result.trace])
    payload = result.summary()
    if result.feasible:
        env = fabrication_envelope(result, cfg.optimize.envelope_rel_err)
        _emit(out, cfg, "envelope.csv", ["co", "ej_hz", "eta", "feasible"], env.points)
        payload["envelope"] = {k: v for k, v in env.to_dict().items() if k != "points"}
    _emit_json(out, cfg, _summary(cfg, "optimize", args, **payload))
    if not result.feasible:
        raise Infeasible("no point satisfies the constraints")
    return EXIT_OK


def cmd_catapult(cfg: RunConfig, out: Path, args) -> int:
    """Write the three-segment catapult trajectory."""
    if cfg.pulse.kind != "catapult":
        cfg = replace(cfg, pulse=replace(cfg.pulse, kind="catapult"))
    seq = build_drive(cfg)
    dt = cfg.pulse.t_r / 100
    rows = [(t, c, float(_from_chi(cfg, c))) for t, c in trajectory(seq, dt)]
    _emit(out, cfg, "trajectory.csv", ["t", "chi", "control"], rows)
    mid = seq.middle
    payload = dict(
        duration=seq.duration,
        boundaries=list(segment_bounds(seq)),
        segments=[[s.chi_start, s.chi_end] for s in seq.segments],
        middle_slew_rate=abs(mid.span) / mid.t_r,
    )
    _emit_json(out, cfg, _summary(cfg, "catapult", args, **payload))
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, out: Path, args) -> int:
    """Estimate photons leaked into the output band by the control pulse."""
    sc_ = cfg.spectrum
    p = cfg.params()
    omega = 2 * math.pi * sc_.emission_hz
    t_r = cfg.pulse.t_r if sc_.t_r is None else sc_.t_r
    prob = _problem(cfg, t_r=t_r)
    if cfg.architecture == "cpb":
        rep = usable_efficiency_cpb(p, prob.sweep_rate, omega, dephasing=cfg.optimize.dephasing)
    else:
        rep = usable_efficiency_flux(p, prob.sweep_rate, omega)
    gamma = rep.gamma2 if sc_.gamma_linewidth is None else sc_.gamma_linewidth
    grid = cfg.sweep.grid() if (cfg.sweep.axis == "t_r" and (cfg.sweep.values or cfg.sweep.log_range)) else [t_r]
    rows = []
    for t in grid:
        leak = spectral_leakage(sc_.pulse_kind, cfg.architecture, p, omega, gamma, sc_.beta_c, t, sc_.period)
        rows.append((t, sc_.pulse_kind, leak))
    _emit(out, cfg, "spectrum.csv", ["t_r", "pulse_kind", "leakage"], rows)
    payload = dict(
        leakage=rows[0][2] if len(rows) == 1 else None,
        gamma_linewidth=gamma,
        thermal_population=thermal_population(sc_.emission_hz, sc_.temperature_k),
        protocol_decay_bound=protocol_decay_bound(t_r, rep.t1),
        report=rep.to_dict(),
    )
    _emit_json(out, cfg, _summary(cfg, "spectrum", args, **payload))
    return EXIT_OK


HANDLERS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "catapult": cmd_catapult,
    "leakage": cmd_leakage,
    "spectrum": cmd_spectrum,
}


# -- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lzphoton", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=HANDLERS[name].__doc__)
        cmd.add_argument("--config", type=Path, default=None, help="YAML run configuration")
        cmd.add_argument("--out", type=Path, default=None, help="output directory for this run")
        cmd.add_argument("--threads", type=int, default=1, help="worker processes for scans")
        cmd.add_argument("--seed", type=int, default=None, help="reserved; runs are deterministic")
    return parser


def _error(kind: str, exc: BaseException) -> None:
    print(json.dumps({"error": kind, "message": str(exc)}), file=sys.stderr)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ValidationError("--threads must be >= 1")
        cfg = load_config(args.config) if args.config else config_from_dict({})
        out = args.out if args.out is not None else Path(cfg.output.directory) / f"{args.command}-{cfg.name}"
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.yaml").write_text(dump_config(cfg), encoding="utf-8")
        code = HANDLERS[args.command](cfg, out, args)
    except ValidationError as exc:
        _error("validation", exc)
        return EXIT_VALIDATION
    except (FileNotFoundError, IsADirectoryError) as exc:
        _error("validation", exc)
        return EXIT_VALIDATION
    except SolverError as exc:
        _error("solver", exc)
        return EXIT_SOLVER
    except Infeasible as exc:
        _error("infeasible", exc)
        return EXIT_INFEASIBLE
    print(str(out))
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
