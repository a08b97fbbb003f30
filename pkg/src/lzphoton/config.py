"""Run configuration: a YAML document with one section per concern.

Every section maps onto a frozen dataclass; unknown keys are rejected with the
dotted path of the offending key.  Physical values are validated by building
the owning objects (device params, solver options, pulse) at load time.

Example::

    architecture: cpb
    device: {ej_hz: 1.0e9, eq_hz: 19.27e9}
    pulse: {shape: linear, start: 0.1, end: 0.9, t_r: 1.0e-9}
"""

from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from .dynamics import SolverOptions
from .model import ChargeBasis, CpbParams, FluxParams, ValidationError
from .pulses import PulseShape

ARCHITECTURES = {"cpb": CpbParams, "flux": FluxParams}
SHAPES = tuple(s.value for s in PulseShape)


@dataclass(frozen=True)
class PulseConfig:
    """Control trajectory in physical units (n_g for the CPB, flux offset in Phi0 for flux).

    ``kind`` is ``rise`` (one segment from ``start`` to ``end``) or ``catapult``
    (``chi_0`` is then the full control range, centred on the crossing).
    """

    kind: str = "rise"
    shape: str = "linear"
    start: float = 0.1
    end: float = 0.9
    t_r: float = 1e-9
    chi_0: Optional[float] = None
    rho: float = 1.0

    def __post_init__(self):
        if self.kind not in ("rise", "catapult"):
            raise ValidationError(f"pulse.kind must be rise or catapult, got {self.kind!r}")
        if self.shape not in SHAPES:
            _bad_shape(self.shape)
        if not self.t_r > 0:
            raise ValidationError(f"pulse.t_r must be > 0, got {self.t_r!r}")


def _bad_shape(name):
    raise ValidationError(f"shape {name!r} is not one of {list(SHAPES)}")


@dataclass(frozen=True)
class SweepConfig:
    """Grid for ``sweep``/``leakage``: explicit ``values`` or ``log_range = [lo, hi, n]``."""

    axis: str = "t_r"
    mode: str = "dynamics"
    values: Optional[list] = None
    log_range: Optional[list] = None
    shapes: Optional[list] = None

    def __post_init__(self):
        if self.axis not in ("t_r", "ng_min", "shape"):
            raise ValidationError(f"sweep.axis must be t_r, ng_min or shape, got {self.axis!r}")
        if self.mode not in ("dynamics", "optimize"):
            raise ValidationError(f"sweep.mode must be dynamics or optimize, got {self.mode!r}")
        if self.values is not None and self.log_range is not None:
            raise ValidationError("sweep: give values or log_range, not both")
        if self.log_range is not None:
            if len(self.log_range) != 3:
                raise ValidationError("sweep.log_range must be [lo, hi, n]")
            lo, hi, n = self.log_range
            if not (float(lo) > 0 and float(hi) >= float(lo) and int(n) >= 1):
                raise ValidationError("sweep.log_range needs 0 < lo <= hi and n >= 1")
        for s in self.shapes or []:
            if s not in SHAPES:
                _bad_shape(s)

    def grid(self) -> list:
        import numpy as np

        if self.values is not None:
            vals = list(self.values)
        elif self.log_range is not None:
            lo, hi, n = self.log_range
            vals = [float(x) for x in np.geomspace(float(lo), float(hi), int(n))]
        else:
            vals = []
        if not vals:
            raise ValidationError("sweep grid is empty")
        if self.axis == "shape":
            for s in vals:
                if s not in SHAPES:
                    _bad_shape(s)
            return vals
        return [float(v) for v in vals]


@dataclass(frozen=True)
class OptimizeConfig:
    t1_max: float = 200e-9
    linewidth_max_hz: Optional[float] = None
    linewidth_slack: float = 0.25
    co_bounds: list = field(default_factory=lambda: [0.1e-15, 50e-15])
    ej_bounds_hz: list = field(default_factory=lambda: [1e9, 250e9])
    emission_hz: float = 6e9
    ng_span: float = 0.8
    flux_span_phi0: float = 0.2
    flux_mu_angular: bool = False
    dephasing: str = "approx"
    n_grid: int = 48
    n_golden: int = 40
    envelope_rel_err: float = 0.10

    def __post_init__(self):
        if self.dephasing not in ("approx", "full"):
            raise ValidationError(f"optimize.dephasing must be approx or full, got {self.dephasing!r}")
        if not 0 <= self.envelope_rel_err < 1:
            raise ValidationError("optimize.envelope_rel_err must lie in [0, 1)")


@dataclass(frozen=True)
class SpectrumConfig:
    """Control-pulse leakage estimate; ``t_r`` defaults to the pulse rise time."""

    pulse_kind: str = "triangle"
    beta_c: float = 1.0
    t_r: Optional[float] = None
    period: Optional[float] = None
    emission_hz: float = 6e9
    gamma_linewidth: Optional[float] = None
    temperature_k: float = 0.02

    def __post_init__(self):
        if self.pulse_kind not in ("triangle", "trapezoid"):
            raise ValidationError(f"spectrum.pulse_kind must be triangle or trapezoid, got {self.pulse_kind!r}")
        if not 0 <= self.beta_c <= 1:
            raise ValidationError("spectrum.beta_c must lie in [0, 1]")


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "runs"
    formats: list = field(default_factory=lambda: ["csv", "json"])

    def __post_init__(self):
        bad = set(self.formats) - {"csv", "json"}
        if bad:
            raise ValidationError(f"output.formats: unknown {sorted(bad)}")


@dataclass(frozen=True)
class RunConfig:
    architecture: str = "cpb"
    name: str = "run"
    device: dict = field(default_factory=dict)
    basis: dict = field(default_factory=dict)
    pulse: PulseConfig = field(default_factory=PulseConfig)
    solver: dict = field(default_factory=dict)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    optimize: OptimizeConfig = field(default_factory=OptimizeConfig)
    spectrum: SpectrumConfig = field(default_factory=SpectrumConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ValidationError(f"architecture must be one of {sorted(ARCHITECTURES)}")
        # build once so bad physics fails at load time
        self.params()
        self.charge_basis()
        self.solver_options()

    def params(self):
        cls = ARCHITECTURES[self.architecture]
        return cls(**self.device)

    def charge_basis(self) -> ChargeBasis:
        return ChargeBasis(**self.basis)

    def solver_options(self) -> SolverOptions:
        return SolverOptions(**self.solver)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


# -- loading -----------------------------------------------------------------


def _coerce(value: Any, hint: Any, path: str) -> Any:
    """Coerce YAML scalars to the annotated type; PyYAML reads ``1e-9`` as a string."""
    if value is None:
        return None
    origin = typing.get_origin(hint)
    args = [a for a in typing.get_args(hint) if a is not type(None)]
    if origin is typing.Union and len(args) == 1:
        hint = args[0]
    try:
        if hint is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        if hint is float:
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if hint is int:
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise TypeError
            return int(float(value))
        if hint is str:
            if not isinstance(value, str):
                raise TypeError
            return value
    except (TypeError, ValueError):
        raise ValidationError(f"{path}: expected {hint.__name__}, got {value!r}") from None
    return value


def _numeric(value: Any, path: str) -> Any:
    if isinstance(value, list):
        return [_numeric(v, f"{path}[{i}]") for i, v in enumerate(value)]
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return value
    return value


def _build(cls, data: Any, path: str):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ValidationError(f"{path or 'config'}: expected a mapping")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        where = f"{path}." if path else ""
        raise ValidationError(f"unknown key {where}{unknown[0]}")
    kwargs = {}
    for k, v in data.items():
        sub = f"{path}.{k}" if path else k
        hint = hints[k]
        if dataclasses.is_dataclass(hint):
            kwargs[k] = _build(hint, v, sub)
        elif hint is list or typing.get_origin(hint) is list or (
            typing.get_origin(hint) is typing.Union and list in typing.get_args(hint)
        ):
            if v is not None and not isinstance(v, list):
                raise ValidationError(f"{sub}: expected a list")
            kwargs[k] = _numeric(v, sub) if k not in ("shapes", "formats") else v
        else:
            kwargs[k] = _coerce(v, hint, sub)
    return cls(**kwargs)


def _typed_block(data: Any, cls, path: str) -> dict:
    """Validate a free-form block against a dataclass's fields and coerce types."""
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a mapping")
    hints = typing.get_type_hints(cls)
    out = {}
    for k, v in data.items():
        if k not in hints:
            raise ValidationError(f"unknown key {path}.{k}")
        out[k] = _coerce(v, hints[k], f"{path}.{k}")
    return out


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ValidationError("config must be a mapping")
    data = dict(data)
    arch = data.get("architecture", "cpb")
    if arch not in ARCHITECTURES:
        raise ValidationError(f"architecture must be one of {sorted(ARCHITECTURES)}, got {arch!r}")
    data["device"] = _typed_block(data.get("device"), ARCHITECTURES[arch], "device")
    data["basis"] = _typed_block(data.get("basis"), ChargeBasis, "basis")
    data["solver"] = _typed_block(data.get("solver"), SolverOptions, "solver")
    return _build(RunConfig, data, "")


def load_config(path: str | Path) -> RunConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"{path}: not valid YAML ({exc})") from None
    return config_from_dict(data or {})


def dump_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)
