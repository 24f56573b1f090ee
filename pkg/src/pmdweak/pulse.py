"""Gaussian pulses, sampling grids and the Fourier pair used for propagation.

Time is in picoseconds and angular frequency in rad/ps. Fields are stored
at baseband: the ``exp(-i omega0 t)`` carrier is factored out and only
enters through the phases ``b * omega0`` of individual elements.

Transform convention (matching an ``exp(-i omega t)`` synthesis kernel)::

    f(t)    = integral dx  exp(-i x t) F(x)
    F(x)    = 1/(2 pi) integral dt  exp(+i x t) f(t)

so multiplying a spectrum by ``exp(+i x tau)`` delays the field by ``tau``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AnnihilationError, ValidationError

MIN_SPAN_IN_TC = 16.0
MAX_DT_IN_TC = 1.0 / 32.0


@dataclass(frozen=True)
class GaussianPulse:
    """Transform-limited Gaussian with ``|g|^2`` of standard deviation ``t_c``."""

    t_c: float
    omega0: float = 1216.0

    def __post_init__(self):
        if not (self.t_c > 0 and math.isfinite(self.t_c)):
            raise ValidationError(f"t_c must be finite and > 0, got {self.t_c!r}")
        if not (self.omega0 >= 0 and math.isfinite(self.omega0)):
            raise ValidationError(f"omega0 must be finite and >= 0, got {self.omega0!r}")

    @property
    def amplitude(self) -> float:
        return (math.sqrt(2 * math.pi) * self.t_c) ** -0.5

    def envelope(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.exp(-0.25 * (t / self.t_c) ** 2)


@dataclass(frozen=True)
class Grid:
    """Centered time grid ``t_j = (j - n/2) dt`` and its baseband frequency grid."""

    n: int
    t_span: float

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ValidationError(f"grid size must be an integer, got {self.n!r}")
        if self.n < 64 or self.n & (self.n - 1):
            raise ValidationError(f"grid size must be a power of two >= 64, got {self.n}")
        if not (self.t_span > 0 and math.isfinite(self.t_span)):
            raise ValidationError(f"t_span must be finite and > 0, got {self.t_span!r}")

    @classmethod
    def for_pulse(cls, t_c: float, total_dgd: float = 0.0, n: int | None = None) -> "Grid":
        """Grid obeying the sizing rule: span >= 16 t_c + 2 sum(DGD), dt <= t_c / 32.

        ``n`` is a lower bound; it is doubled until the step is fine enough.
        """
        span = MIN_SPAN_IN_TC * t_c + 2.0 * total_dgd
        n = 4096 if n is None else n
        return cls(_samples_for(span, t_c, n), span)

    @property
    def dt(self) -> float:
        return self.t_span / self.n

    @property
    def domega(self) -> float:
        return 2 * math.pi / self.t_span

    @property
    def t(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dt

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.domega


def _samples_for(span: float, t_c: float, n_min: int) -> int:
    step = MAX_DT_IN_TC * t_c
    needed = span / step if step > 0 else math.inf
    if not math.isfinite(needed):
        raise ValidationError(f"cannot resolve t_c = {t_c!r} over a {span!r} ps window")
    n = n_min
    if needed > n:
        n = max(n, 1 << math.ceil(math.log2(needed)))
    while span / n > MAX_DT_IN_TC * t_c:
        n *= 2
    return n


@dataclass(frozen=True, eq=False)
class SampledField:
    """Two-component field ``h |H> + v |V>`` sampled on ``grid``."""

    grid: Grid
    h: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        if self.h.shape != (self.grid.n,) or self.v.shape != (self.grid.n,):
            raise ValidationError("field components must have length grid.n")

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.h) ** 2 + np.abs(self.v) ** 2


def gaussian_envelope(pulse: GaussianPulse, grid: Grid) -> np.ndarray:
    """Baseband samples of ``A exp(-(t/t_c)^2 / 4)`` on ``grid``."""
    if grid.t_span < MIN_SPAN_IN_TC * pulse.t_c:
        raise ValidationError(
            f"time window {grid.t_span} ps is narrower than 16 t_c = {16 * pulse.t_c} ps"
        )
    return pulse.envelope(grid.t).astype(complex)


def _check_len(values, grid: Grid) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    if values.shape[-1] != grid.n:
        raise ValidationError(f"expected {grid.n} samples, got {values.shape[-1]}")
    return values


def forward_transform(field, grid: Grid) -> np.ndarray:
    """Spectrum ``F(x_k)`` of time samples ``f(t_j)`` (last axis)."""
    f = _check_len(field, grid)
    ax = -1
    spec = np.fft.ifft(np.fft.ifftshift(f, axes=ax), axis=ax)
    return np.fft.fftshift(spec, axes=ax) * (grid.n * grid.dt / (2 * math.pi))


def inverse_transform(spectrum, grid: Grid) -> np.ndarray:
    """Time samples ``f(t_j)`` from spectrum samples ``F(x_k)`` (last axis)."""
    s = _check_len(spectrum, grid)
    ax = -1
    f = np.fft.fft(np.fft.ifftshift(s, axes=ax), axis=ax)
    return np.fft.fftshift(f, axes=ax) * grid.domega


def mean_time(intensity, grid: Grid) -> float:
    """First moment ``int t I dt / int I dt`` by the trapezoid rule."""
    i = np.asarray(intensity, dtype=float)
    if i.shape != (grid.n,):
        raise ValidationError(f"expected {grid.n} intensity samples, got {i.shape}")
    t = grid.t
    total = np.trapezoid(i, dx=grid.dt)
    if not total > 0:
        raise AnnihilationError("total intensity is zero")
    return float(np.trapezoid(t * i, dx=grid.dt) / total)
