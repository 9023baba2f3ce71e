"""Time-varying Rayleigh fading envelopes.

Each hop is synthesised with a sum-of-sinusoids model of the isotropic
(Clarke) Doppler spectrum: ``N`` oscillators per quadrature component with
arrival angles ``alpha_n = (2*pi*n - pi + theta) / (4N)``, in-phase
frequencies ``F cos(alpha_n)``, quadrature frequencies ``F sin(alpha_n)`` and
independent uniform phases. One draw of ``theta`` and the phases is made per
seed, so a trace is a deterministic function of ``(params, config)``.

Only the envelope is kept; the complex phase never enters any relay
switching quantity.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from . import _kernels
from .errors import ConfigurationError, InsufficientDataError, ResolutionError

#: Bit generator behind every trace; recorded in config dumps and CSV headers.
RNG_ALGORITHM = "PCG64"

#: Minimum ratio sample_rate_hz / doppler_hz accepted by :func:`generate_trace`.
MIN_OVERSAMPLING = 32

#: Default ratio used when a scenario does not fix its sample rate.
DEFAULT_OVERSAMPLING = 64

MIN_VALIDATION_SAMPLES = 100_000


@dataclass(frozen=True)
class LinkParams:
    """One wireless hop: average squared gain (linear) and max Doppler (Hz)."""

    omega: float
    doppler_hz: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ConfigurationError(f"omega must be a positive finite number, got {self.omega!r}")
        if not (math.isfinite(self.doppler_hz) and self.doppler_hz > 0):
            raise ConfigurationError(f"doppler_hz must be a positive finite number, got {self.doppler_hz!r}")


@dataclass(frozen=True)
class TraceConfig:
    sample_rate_hz: float
    duration_s: float
    num_sinusoids: int = 64
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.sample_rate_hz) and self.sample_rate_hz > 0):
            raise ConfigurationError(f"sample_rate_hz must be positive, got {self.sample_rate_hz!r}")
        if not (math.isfinite(self.duration_s) and self.duration_s > 0):
            raise ConfigurationError(f"duration_s must be positive, got {self.duration_s!r}")
        if int(self.num_sinusoids) != self.num_sinusoids or self.num_sinusoids < 8:
            raise ConfigurationError(f"num_sinusoids must be an integer >= 8, got {self.num_sinusoids!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigurationError(f"seed must be a non-negative integer, got {self.seed!r}")

    @property
    def num_samples(self) -> int:
        return int(round(self.duration_s * self.sample_rate_hz))


@dataclass(frozen=True, eq=False)
class FadingTrace:
    params: LinkParams
    config: TraceConfig
    samples: np.ndarray

    @property
    def sample_rate_hz(self) -> float:
        return self.config.sample_rate_hz

    @property
    def duration_s(self) -> float:
        return self.samples.shape[0] / self.config.sample_rate_hz

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.shape[0]) / self.config.sample_rate_hz


@dataclass(frozen=True)
class ValidationReport:
    omega: float
    mean_square: float
    moment_deviation: float
    ks_distance: float
    tolerance: float
    passed: bool


def check_resolution(params: LinkParams, sample_rate_hz: float, label: str = "hop") -> None:
    """Raise :class:`ResolutionError` if the hop is under-sampled."""
    needed = MIN_OVERSAMPLING * params.doppler_hz
    if sample_rate_hz < needed:
        raise ResolutionError(
            f"{label}: sample rate {sample_rate_hz:g} Hz is below {MIN_OVERSAMPLING} x "
            f"doppler ({params.doppler_hz:g} Hz) = {needed:g} Hz"
        )


def oscillator_bank(params: LinkParams, num_sinusoids: int, seed: int):
    """Angular frequencies and phases of the two quadrature oscillator banks."""
    rng = np.random.Generator(np.random.PCG64(seed))
    theta = rng.uniform(-np.pi, np.pi)
    phi_c = rng.uniform(-np.pi, np.pi, num_sinusoids)
    phi_s = rng.uniform(-np.pi, np.pi, num_sinusoids)
    n = np.arange(1, num_sinusoids + 1)
    alpha = (2.0 * np.pi * n - np.pi + theta) / (4.0 * num_sinusoids)
    wd = 2.0 * np.pi * params.doppler_hz
    return wd * np.cos(alpha), wd * np.sin(alpha), phi_c, phi_s


def generate_trace(params: LinkParams, config: TraceConfig, label: str = "hop") -> FadingTrace:
    """Synthesise a Rayleigh envelope with E[a^2] = omega and Clarke Doppler.

    ``label`` names the hop in the resolution error raised when
    ``config.sample_rate_hz < 32 * params.doppler_hz``.
    """
    check_resolution(params, config.sample_rate_hz, label)
    n = config.num_samples
    if n < 1:
        raise ConfigurationError("trace would contain no samples")
    w_c, w_s, phi_c, phi_s = oscillator_bank(params, config.num_sinusoids, config.seed)
    scale = math.sqrt(params.omega / config.num_sinusoids)
    samples = _kernels.sos_envelope(n, 1.0 / config.sample_rate_hz, w_c, w_s, phi_c, phi_s, scale)
    samples.setflags(write=False)
    return FadingTrace(params=params, config=config, samples=samples)


def rayleigh_lcr(level, omega: float, doppler_hz: float):
    """One-directional level-crossing rate sqrt(2 pi) F rho exp(-rho^2)."""
    rho = np.asarray(level, dtype=float) / math.sqrt(omega)
    return math.sqrt(2.0 * math.pi) * doppler_hz * rho * np.exp(-rho * rho)


def validate_rayleigh(trace: FadingTrace, tolerance: float, omega: float | None = None) -> ValidationReport:
    """Check the marginal of ``trace`` against a Rayleigh law.

    ``omega`` defaults to the value the trace was generated with; pass a
    different one to test against another hypothesis. The trace passes when
    both the relative E[a^2] deviation and the Kolmogorov-Smirnov distance
    are within ``tolerance``.
    """
    x = np.asarray(trace.samples)
    if x.shape[0] < MIN_VALIDATION_SAMPLES:
        raise InsufficientDataError(
            f"validation needs at least {MIN_VALIDATION_SAMPLES} samples, trace has {x.shape[0]}"
        )
    target = trace.params.omega if omega is None else float(omega)
    mean_sq = float(np.mean(x * x))
    dev = abs(mean_sq / target - 1.0)
    ks = float(stats.kstest(x, "rayleigh", args=(0.0, math.sqrt(target / 2.0))).statistic)
    return ValidationReport(
        omega=target,
        mean_square=mean_sq,
        moment_deviation=dev,
        ks_distance=ks,
        tolerance=tolerance,
        passed=bool(dev <= tolerance and ks <= tolerance),
    )


def measure_lcr(samples, sample_rate_hz: float, level: float, direction: str = "down") -> float:
    """Crossings of ``level`` per second, counted between consecutive samples."""
    if direction not in ("up", "down", "both"):
        raise ValueError(f"direction must be 'up', 'down' or 'both', got {direction!r}")
    if level < 0:
        raise ValueError("level must be non-negative")
    x = np.ascontiguousarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 2:
        raise InsufficientDataError("need at least two samples to count crossings")
    up, down = _kernels.crossings(x, float(level))
    count = {"up": up, "down": down, "both": up + down}[direction]
    return count / (x.shape[0] / sample_rate_hz)


def export_trace_csv(trace: FadingTrace, path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t_s", "envelope"])
        for t, a in zip(trace.times, trace.samples):
            writer.writerow([f"{t:.17e}", f"{a:.17e}"])
    return path
