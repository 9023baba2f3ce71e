"""Sample-by-sample execution of the OR and DSSC-B relay selection rules.

Relay numbers are 1-based everywhere in this module's public surface.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ConfigurationError, DomainError
from .fading import FadingTrace


class SelectionMetric(str, enum.Enum):
    MIN_EQUIVALENT = "min_equivalent"
    HALF_HARMONIC_MEAN = "half_harmonic_mean"


def metric_value(metric, a_sr, a_rd):
    """End-to-end envelope equivalent of one relay path.

    ``min_equivalent`` is min(a_SR, a_RD) (decode-and-forward);
    ``half_harmonic_mean`` is a_SR a_RD / (a_SR + a_RD) (amplify-and-forward),
    taken as 0 when both envelopes vanish.
    """
    metric = SelectionMetric(metric)
    a_sr = np.asarray(a_sr, dtype=float)
    a_rd = np.asarray(a_rd, dtype=float)
    if np.any(a_sr < 0) or np.any(a_rd < 0):
        raise DomainError("envelopes must be non-negative")
    if metric is SelectionMetric.MIN_EQUIVALENT:
        out = np.minimum(a_sr, a_rd)
    else:
        lo, hi = np.minimum(a_sr, a_rd), np.maximum(a_sr, a_rd)
        total = lo + hi
        # lo * (hi / total) keeps the factor <= 1 after rounding, so the result never exceeds min
        out = np.where(total > 0, lo * (hi / np.where(total > 0, total, 1.0)), 0.0)
    return out if out.ndim else float(out)


def or_select(metrics: Sequence[float]) -> int:
    """Relay with the largest metric; ties go to the lowest index."""
    values = np.asarray(metrics, dtype=float)
    if values.ndim != 1 or values.shape[0] == 0:
        raise DomainError("need at least one metric value")
    return int(np.argmax(values)) + 1


@dataclass(frozen=True)
class DsscState:
    active: int = 1
    prev_above: bool = False

    def __post_init__(self):
        if self.active not in (1, 2):
            raise DomainError(f"DSSC-B active relay must be 1 or 2, got {self.active!r}")


def dssc_step(state: DsscState, metric_active: float, threshold_env: float, metric_other: float | None = None):
    """Advance DSSC-B by one decision period.

    A switch happens iff the active relay was above ``threshold_env`` in the
    previous period and is below it now. After a switch, ``metric_other``
    (the newly activated relay's current metric) seeds ``prev_above``; when
    it is omitted the new relay starts as not-above.
    """
    if state.prev_above and metric_active < threshold_env:
        new_active = 2 if state.active == 1 else 1
        prev = metric_other is not None and metric_other > threshold_env
        return DsscState(new_active, bool(prev)), True
    return DsscState(state.active, bool(metric_active > threshold_env)), False


@dataclass(frozen=True, eq=False)
class SelectionTrace:
    """Outcome of running a selection rule over aligned traces.

    ``active_index`` holds the 1-based active relay per sample. Switch ``k``
    happens at sample ``switch_samples[k]`` and moves from ``from_relay[k]``
    to ``to_relay[k]``.
    """

    active_index: np.ndarray
    switch_samples: np.ndarray
    from_relay: np.ndarray
    to_relay: np.ndarray
    sample_rate_hz: float

    @property
    def num_samples(self) -> int:
        return int(self.active_index.shape[0])

    @property
    def duration_s(self) -> float:
        return self.num_samples / self.sample_rate_hz

    @property
    def num_switches(self) -> int:
        return int(self.switch_samples.shape[0])

    @property
    def switch_times(self) -> np.ndarray:
        return self.switch_samples / self.sample_rate_hz

    @property
    def activation_intervals(self) -> np.ndarray:
        """Completed dwell times between consecutive switches (s)."""
        return np.diff(self.switch_times)

    @property
    def interval_relays(self) -> np.ndarray:
        """Relay active during each completed interval."""
        return self.to_relay[:-1]

    @property
    def open_intervals(self) -> tuple:
        """Censored head and tail dwell times (s)."""
        if self.num_switches == 0:
            return self.duration_s, 0.0
        times = self.switch_times
        return float(times[0]), float(self.duration_s - times[-1])


def _from_active(active0: np.ndarray, sample_rate_hz: float) -> SelectionTrace:
    active = active0.astype(np.int8) + 1
    samples = np.asarray(_kernels.change_points(active0), dtype=np.int64)
    return SelectionTrace(
        active_index=active,
        switch_samples=samples,
        from_relay=active[samples - 1].astype(np.int8) if samples.size else np.zeros(0, np.int8),
        to_relay=active[samples].astype(np.int8) if samples.size else np.zeros(0, np.int8),
        sample_rate_hz=float(sample_rate_hz),
    )


def _check_aligned(traces: Sequence[FadingTrace], expected: int | None = None):
    if expected is not None and len(traces) != expected:
        raise ConfigurationError(f"expected {expected} traces, got {len(traces)}")
    if len(traces) < 4 or len(traces) % 2:
        raise ConfigurationError(f"need an even number (>= 4) of hop traces, got {len(traces)}")
    rate = traces[0].sample_rate_hz
    n = traces[0].samples.shape[0]
    for k, tr in enumerate(traces):
        if tr.sample_rate_hz != rate or tr.samples.shape[0] != n:
            raise ConfigurationError(
                f"trace {k} is misaligned: {tr.samples.shape[0]} samples at {tr.sample_rate_hz:g} Hz, "
                f"expected {n} at {rate:g} Hz"
            )
    return rate


def relay_metrics(traces: Sequence[FadingTrace], metric=SelectionMetric.MIN_EQUIVALENT) -> np.ndarray:
    """(L, n) array of per-relay metrics from hop traces ordered sr1, rd1, sr2, rd2, ..."""
    _check_aligned(traces)
    return np.stack(
        [metric_value(metric, traces[k].samples, traces[k + 1].samples) for k in range(0, len(traces), 2)]
    )


def run_or(traces: Sequence[FadingTrace], metric=SelectionMetric.MIN_EQUIVALENT) -> SelectionTrace:
    """Per-sample max-metric selection over 2L hop traces."""
    rate = _check_aligned(traces)
    metrics = np.ascontiguousarray(relay_metrics(traces, metric))
    return _from_active(_kernels.argmax_rows(metrics), rate)


def run_dssc(traces: Sequence[FadingTrace], threshold_env: float, period_samples: int = 1) -> SelectionTrace:
    """DSSC-B over four hop traces (two relays, min-equivalent metric).

    The state machine is advanced once every ``period_samples`` samples;
    switches are stamped at the decision sample and the new relay is active
    from that sample on.
    """
    rate = _check_aligned(traces, expected=4)
    if int(period_samples) != period_samples or period_samples < 1:
        raise ConfigurationError(f"period_samples must be a positive integer, got {period_samples!r}")
    if threshold_env < 0:
        raise DomainError("threshold envelope must be non-negative")
    metrics = relay_metrics(traces)
    m1 = np.ascontiguousarray(metrics[0, ::period_samples])
    m2 = np.ascontiguousarray(metrics[1, ::period_samples])
    act_periods, _ = _kernels.dssc_walk(m1, m2, float(threshold_env))
    n = metrics.shape[1]
    active0 = np.repeat(np.asarray(act_periods, dtype=np.int8), period_samples)[:n]
    return _from_active(active0, rate)


@dataclass(frozen=True)
class SelectionSummary:
    switch_rate_hz: float
    mean_activation_s: float
    occupancy: tuple
    censored: bool
    num_switches: int


def summarize(trace: SelectionTrace, duration_s: float | None = None, num_relays: int | None = None):
    """Switching rate, mean completed dwell time and per-relay occupancy.

    With fewer than two switches no dwell time is complete; the mean
    activation is then reported as the full duration and ``censored`` is set.
    """
    duration = trace.duration_s if duration_s is None else float(duration_s)
    if not duration > 0:
        raise DomainError("duration must be positive")
    n_relays = int(trace.active_index.max()) if num_relays is None else num_relays
    counts = np.bincount(trace.active_index, minlength=n_relays + 1)[1:]
    occupancy = tuple(float(c) / trace.num_samples for c in counts)
    intervals = trace.activation_intervals
    if intervals.size == 0:
        mean_act, censored = duration, True
    else:
        mean_act, censored = float(intervals.mean()), False
    return SelectionSummary(trace.num_switches / duration, mean_act, occupancy, censored, trace.num_switches)


def export_switch_events_csv(trace: SelectionTrace, path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t_s", "from_relay", "to_relay"])
        for t, a, b in zip(trace.switch_times, trace.from_relay, trace.to_relay):
            writer.writerow([f"{t:.17e}", int(a), int(b)])
    return path
