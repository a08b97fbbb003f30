"""Control trajectories: single rise segments and the three-segment catapult.

The control value ``chi`` is dimensionless: ``n_g - 0.5`` for the CPB and the
flux offset in flux quanta for the flux qubit, so the avoided crossing sits at
``chi = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

import numpy as np
from scipy.optimize import brentq

from .model import ValidationError

_E9 = math.exp(-9.0)
_TANH3 = math.tanh(3.0)


class PulseShape(str, enum.Enum):
    LINEAR = "linear"
    GAUSSIAN = "gaussian"
    TANH = "tanh"
    EXPONENTIAL = "exponential"

    def progress(self, tau, ratio: float | None = None):
        """Normalised progress (value - start)/(end - start) at tau = t/t_r."""
        tau = np.asarray(tau, dtype=float)
        if self is PulseShape.LINEAR:
            return tau
        if self is PulseShape.GAUSSIAN:
            return (np.exp(-9.0 * (1.0 - tau) ** 2) - _E9) / (1.0 - _E9)
        if self is PulseShape.TANH:
            return 0.5 * (1.0 + np.tanh(6.0 * (tau - 0.5)) / _TANH3)
        if ratio is None:
            raise ValidationError("exponential rise needs the end/start ratio")
        return (ratio**tau - 1.0) / (ratio - 1.0)

    def progress_rate(self, tau, ratio: float | None = None):
        """d(progress)/d(tau)."""
        tau = np.asarray(tau, dtype=float)
        if self is PulseShape.LINEAR:
            return np.ones_like(tau)
        if self is PulseShape.GAUSSIAN:
            return 18.0 * (1.0 - tau) * np.exp(-9.0 * (1.0 - tau) ** 2) / (1.0 - _E9)
        if self is PulseShape.TANH:
            return 3.0 / (_TANH3 * np.cosh(6.0 * (tau - 0.5)) ** 2)
        return math.log(ratio) * ratio**tau / (ratio - 1.0)


@dataclass(frozen=True)
class PulseSegment:
    """One rise from ``chi_start`` to ``chi_end`` in ``t_r`` seconds.

    ``origin`` is the reference point for the exponential rise, whose ratio is
    ``(chi_end - origin)/(chi_start - origin)``; use ``origin=-0.5`` to express
    a CPB exponential rise in ``n_g``.  ``mirrored`` plays the segment backwards
    in time.
    """

    shape: PulseShape
    chi_start: float
    chi_end: float
    t_r: float
    origin: float = 0.0
    mirrored: bool = False

    def __post_init__(self):
        object.__setattr__(self, "shape", PulseShape(self.shape))
        if not self.t_r > 0:
            raise ValidationError(f"t_r must be > 0, got {self.t_r!r}")
        if self.shape is PulseShape.EXPONENTIAL:
            a, b = self._base_endpoints()
            a0, b0 = a - self.origin, b - self.origin
            if a0 == 0 or b0 == 0 or (a0 > 0) != (b0 > 0):
                raise ValidationError(
                    "exponential rise needs nonzero same-signed endpoints relative to origin"
                )
            if a0 == b0:
                raise ValidationError("exponential rise needs distinct endpoints")

    @property
    def duration(self) -> float:
        return self.t_r

    @property
    def span(self) -> float:
        return self.chi_end - self.chi_start

    def _base_endpoints(self) -> tuple[float, float]:
        # endpoints of the un-mirrored rise
        if self.mirrored:
            return self.chi_end, self.chi_start
        return self.chi_start, self.chi_end

    def _ratio(self) -> float | None:
        if self.shape is not PulseShape.EXPONENTIAL:
            return None
        a, b = self._base_endpoints()
        return (b - self.origin) / (a - self.origin)

    def _value(self, t):
        tau = np.asarray(t, dtype=float) / self.t_r
        if self.mirrored:
            tau = 1.0 - tau
        a, b = self._base_endpoints()
        return a + (b - a) * self.shape.progress(tau, self._ratio())

    def _rate(self, t):
        tau = np.asarray(t, dtype=float) / self.t_r
        sign = 1.0
        if self.mirrored:
            tau, sign = 1.0 - tau, -1.0
        a, b = self._base_endpoints()
        return sign * (b - a) * self.shape.progress_rate(tau, self._ratio()) / self.t_r

    def _check_time(self, t) -> None:
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.t_r):
            raise ValidationError(f"time outside [0, {self.t_r}]")

    def sample(self, t):
        """Control value at time ``t`` (scalar or array) within [0, t_r]."""
        self._check_time(t)
        v = self._value(t)
        return float(v) if np.ndim(v) == 0 else v

    def rate(self, t):
        """Time derivative of the control value (1/s)."""
        self._check_time(t)
        r = self._rate(t)
        return float(r) if np.ndim(r) == 0 else r

    def reverse(self) -> "PulseSegment":
        return replace(self, chi_start=self.chi_end, chi_end=self.chi_start, mirrored=not self.mirrored)

    @property
    def pieces(self) -> tuple["PulseSegment", ...]:
        return (self,)


def sample(seg: PulseSegment, t):
    return seg.sample(t)


@dataclass(frozen=True)
class CatapultSequence:
    """Pull back to -rho*chi_0/2, catapult to +rho*chi_0/2, settle at chi_f."""

    segments: tuple[PulseSegment, PulseSegment, PulseSegment]
    chi_i: float
    chi_f: float
    chi_0: float
    t_r: float
    rho: float = 1.0

    @property
    def duration(self) -> float:
        return sum(s.t_r for s in self.segments)

    @property
    def pieces(self) -> tuple[PulseSegment, ...]:
        return self.segments

    @property
    def middle(self) -> PulseSegment:
        return self.segments[1]

    def sample(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t_arr < 0) or np.any(t_arr > self.duration):
            raise ValidationError(f"time outside [0, {self.duration}]")
        out = np.empty_like(t_arr)
        start = 0.0
        for k, seg in enumerate(self.segments):
            last = k == len(self.segments) - 1
            mask = (t_arr >= start) & ((t_arr <= start + seg.t_r) if last else (t_arr < start + seg.t_r))
            out[mask] = seg._value(np.clip(t_arr[mask] - start, 0.0, seg.t_r))
            start += seg.t_r
        return float(out[0]) if np.ndim(t) == 0 else out

    def reverse(self) -> "CatapultSequence":
        """Time-mirrored sequence (the return half-cycle)."""
        segs = tuple(s.reverse() for s in reversed(self.segments))
        return CatapultSequence(segs, self.chi_f, self.chi_i, self.chi_0, self.t_r, self.rho)


def catapult(
    chi_i: float,
    chi_f: float,
    chi_0: float,
    t_r: float,
    shape: PulseShape | str = PulseShape.LINEAR,
    rho: float = 1.0,
) -> CatapultSequence:
    """Three-segment catapult from ``chi_i`` to ``chi_f`` over the full range ``chi_0``.

    The crossing is always traversed by the middle segment at slew rate
    ``rho * chi_0 / t_r`` regardless of the set points.
    """
    shape = PulseShape(shape)
    if not chi_0 > 0:
        raise ValidationError("chi_0 must be > 0")
    if not 0 < rho <= 1:
        raise ValidationError(f"rho must lie in (0, 1], got {rho!r}")
    half = chi_0 / 2
    for name, v in (("chi_i", chi_i), ("chi_f", chi_f)):
        if abs(v) > half:
            raise ValidationError(f"{name}={v} outside [-{half}, {half}]")
    lo, hi = -rho * half, rho * half
    segs = (
        PulseSegment(shape, chi_i, lo, t_r),
        PulseSegment(shape, lo, hi, t_r),
        PulseSegment(shape, hi, chi_f, t_r),
    )
    return CatapultSequence(segs, chi_i, chi_f, chi_0, t_r, rho)


def crossing_time(seg: PulseSegment, chi_crossing: float = 0.0) -> float:
    lo, hi = sorted((seg.chi_start, seg.chi_end))
    if not lo < chi_crossing < hi:
        raise ValidationError(f"crossing {chi_crossing} not bracketed by [{lo}, {hi}]")
    return brentq(lambda t: float(seg._value(t)) - chi_crossing, 0.0, seg.t_r, xtol=1e-24, rtol=1e-15)


def effective_rise_time(seg: PulseSegment, chi_crossing: float = 0.0) -> float:
    """Span divided by the slew rate where the trajectory crosses ``chi_crossing``."""
    t_c = crossing_time(seg, chi_crossing)
    rate = float(seg._rate(t_c))
    if rate == 0:
        raise ValidationError("trajectory is stationary at the crossing")
    return seg.span / rate


def trajectory(drive, dt: float) -> Iterator[tuple[float, float]]:
    """(t, chi) samples every ``dt`` plus each segment boundary, no duplicates."""
    t0 = 0.0
    for k, seg in enumerate(drive.pieces):
        n = max(1, int(math.ceil(seg.t_r / dt - 1e-9)))
        ts = np.linspace(0.0, seg.t_r, n + 1)
        if k:
            ts = ts[1:]
        for t, v in zip(ts, seg._value(ts)):
            yield t0 + float(t), float(v)
        t0 += seg.t_r


def segment_bounds(drive) -> Sequence[float]:
    bounds = [0.0]
    for seg in drive.pieces:
        bounds.append(bounds[-1] + seg.t_r)
    return bounds
