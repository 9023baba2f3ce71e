"""Replicated simulations and their comparison with the closed forms.

Seeds: hop ``j`` (0-based, order sr1, rd1, sr2, rd2, ...) of replication
``k`` is driven by ``SeedSequence(base_seed, spawn_key=(k, j))``, whose
first 64 generated bits become the trace seed. A replication therefore
produces the same traces whether it runs alone, in a batch or in a worker
process.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import closedform as cf
from .closedform import RelayTopology, SwitchThreshold
from .errors import ConfigurationError, UnsupportedTopologyError
from .fading import DEFAULT_OVERSAMPLING, MIN_OVERSAMPLING, LinkParams, TraceConfig, generate_trace
from .protocol import SelectionMetric, run_dssc, run_or, summarize


class Scheme(str, enum.Enum):
    OR = "OR"
    DSSC_B = "DSSC_B"


SWEEP_AXES = ("doppler_ratio", "L", "threshold", "gamma")


@dataclass(frozen=True)
class ExperimentConfig:
    topology: RelayTopology
    scheme: Scheme
    trace: TraceConfig
    metric: SelectionMetric = SelectionMetric.MIN_EQUIVALENT
    threshold: SwitchThreshold | None = None
    replications: int = 20
    base_seed: int = 0
    period_samples: int = 1

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "metric", SelectionMetric(self.metric))
        if self.threshold is not None and not isinstance(self.threshold, SwitchThreshold):
            object.__setattr__(self, "threshold", SwitchThreshold(float(self.threshold)))
        if self.scheme is Scheme.DSSC_B:
            if self.threshold is None:
                raise ConfigurationError("DSSC_B requires a threshold")
            if self.topology.num_relays != 2:
                raise ConfigurationError(f"DSSC_B is defined for two relays, got {self.topology.num_relays}")
            if self.metric is not SelectionMetric.MIN_EQUIVALENT:
                raise ConfigurationError("DSSC_B only supports the min_equivalent metric")
        elif self.threshold is not None:
            raise ConfigurationError("threshold is only meaningful for DSSC_B")
        if int(self.replications) != self.replications or self.replications < 1:
            raise ConfigurationError(f"replications must be an integer >= 1, got {self.replications!r}")
        if int(self.base_seed) != self.base_seed or not 0 <= self.base_seed < 2**64:
            raise ConfigurationError(f"base_seed must be an unsigned 64-bit integer, got {self.base_seed!r}")
        if int(self.period_samples) != self.period_samples or self.period_samples < 1:
            raise ConfigurationError(f"period_samples must be an integer >= 1, got {self.period_samples!r}")
        if self.period_samples != 1 and self.scheme is not Scheme.DSSC_B:
            raise ConfigurationError("period_samples only applies to DSSC_B")


@dataclass(frozen=True)
class RateReport:
    """One simulated quantity next to its closed-form value.

    ``analytic`` is ``None`` when no closed form exists (half-harmonic-mean
    metric, L > 2 non-i.i.d.); ``rel_deviation`` is ``None`` unless
    ``analytic > 0``. ``low_power`` marks estimates built on zero events.
    """

    quantity: str
    analytic: float | None
    sim_mean: float
    sim_stderr: float
    rel_deviation: float | None
    n_events: int
    low_power: bool


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    reports: tuple

    def report(self, quantity: str) -> RateReport:
        for r in self.reports:
            if r.quantity == quantity:
                return r
        raise KeyError(quantity)


@dataclass(frozen=True)
class ReplicationOutcome:
    switches: int
    duration_s: float
    intervals_by_relay: tuple
    occupancy: tuple


def derive_seed(base_seed: int, replication: int, hop: int) -> int:
    seq = np.random.SeedSequence(base_seed, spawn_key=(replication, hop))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def replication_traces(config: ExperimentConfig, k: int) -> list:
    traces = []
    for j, hop in enumerate(config.topology.hops):
        label = f"relay {j // 2 + 1} {'S->R' if j % 2 == 0 else 'R->D'}"
        trace_cfg = replace(config.trace, seed=derive_seed(config.base_seed, k, j))
        traces.append(generate_trace(hop, trace_cfg, label=label))
    return traces


def run_replication(config: ExperimentConfig, k: int) -> ReplicationOutcome:
    traces = replication_traces(config, k)
    if config.scheme is Scheme.OR:
        sel = run_or(traces, config.metric)
    else:
        env = config.threshold.envelope(config.topology.gamma)
        sel = run_dssc(traces, env, config.period_samples)
    n = config.topology.num_relays
    summary = summarize(sel, num_relays=n)
    intervals = sel.activation_intervals
    relays = sel.interval_relays
    by_relay = tuple(tuple(intervals[relays == i].tolist()) for i in range(1, n + 1))
    return ReplicationOutcome(sel.num_switches, sel.duration_s, by_relay, summary.occupancy)


def _mean_stderr(values):
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return math.nan, math.nan
    if x.size == 1:
        return float(x[0]), 0.0
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def _report(quantity, analytic, values, n_events) -> RateReport:
    mean, se = _mean_stderr(values)
    if analytic is not None and analytic > 0 and math.isfinite(analytic) and math.isfinite(mean):
        dev = abs(mean - analytic) / analytic
    else:
        dev = None
    return RateReport(quantity, analytic, mean, se, dev, int(n_events), n_events == 0)


def analytic_values(config: ExperimentConfig) -> dict:
    """Closed-form value of every reported quantity (``None`` where none exists)."""
    top = config.topology
    n = top.num_relays
    out = {"switch_rate": None, "activation_time": None}
    out.update({f"activation_time_{i}": None for i in range(1, n + 1)})
    out.update({f"occupancy_{i}": None for i in range(1, n + 1)})
    if config.scheme is Scheme.OR:
        if config.metric is not SelectionMetric.MIN_EQUIVALENT:
            return out
        try:
            rate = cf.or_switch_rate(top)
            occ = cf.or_occupancy(top)
        except UnsupportedTopologyError:
            return out
    else:
        rate = cf.dssc_switch_rate(top, config.threshold)
        st = cf.dssc_stationary(top, config.threshold)
        occ = (st.rho1, st.rho2)
    out["switch_rate"] = rate
    out["activation_time"] = 1.0 / rate if rate > 0 else math.inf
    for i in range(1, n + 1):
        # each relay gets (on average) one dwell per two switches in the two-relay case
        out[f"activation_time_{i}"] = (2.0 * occ[i - 1] if n == 2 else 1.0) / rate if rate > 0 else math.inf
        out[f"occupancy_{i}"] = occ[i - 1]
    return out


def _aggregate(config: ExperimentConfig, outcomes: Sequence[ReplicationOutcome]) -> tuple:
    n = config.topology.num_relays
    analytic = analytic_values(config)
    total_switches = sum(o.switches for o in outcomes)
    reports = [_report("switch_rate", analytic["switch_rate"], [o.switches / o.duration_s for o in outcomes], total_switches)]

    pooled = [np.concatenate([np.asarray(v) for v in o.intervals_by_relay]) for o in outcomes]
    reports.append(
        _report(
            "activation_time",
            analytic["activation_time"],
            [p.mean() for p in pooled if p.size],
            sum(p.size for p in pooled),
        )
    )
    for i in range(1, n + 1):
        per = [np.asarray(o.intervals_by_relay[i - 1]) for o in outcomes]
        reports.append(
            _report(
                f"activation_time_{i}",
                analytic[f"activation_time_{i}"],
                [p.mean() for p in per if p.size],
                sum(p.size for p in per),
            )
        )
    for i in range(1, n + 1):
        reports.append(
            _report(f"occupancy_{i}", analytic[f"occupancy_{i}"], [o.occupancy[i - 1] for o in outcomes], total_switches)
        )
    return tuple(reports)


def _run_one(args):
    config, k = args
    return run_replication(config, k)


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> ExperimentResult:
    """Run every replication and reduce them into :class:`RateReport` rows.

    Activation times use completed dwell intervals only: the open interval
    before the first switch and the one after the last are censored.
    Results do not depend on ``workers``.
    """
    jobs = [(config, k) for k in range(config.replications)]
    if workers and workers > 1 and config.replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_one, jobs))
    else:
        outcomes = [_run_one(job) for job in jobs]
    return ExperimentResult(config, _aggregate(config, outcomes))


def analytic_only(config: ExperimentConfig) -> ExperimentResult:
    """Closed-form rows with the simulation columns left empty."""
    reports = tuple(
        RateReport(q, v, math.nan, math.nan, None, 0, True) for q, v in analytic_values(config).items()
    )
    return ExperimentResult(config, reports)


# --- sweeps -------------------------------------------------------------------


def _fit_sample_rate(trace: TraceConfig, topology: RelayTopology) -> TraceConfig:
    """Raise the sample rate to the default oversampling when a sweep point needs it."""
    if trace.sample_rate_hz >= MIN_OVERSAMPLING * topology.max_doppler_hz:
        return trace
    return replace(trace, sample_rate_hz=DEFAULT_OVERSAMPLING * topology.max_doppler_hz)


def apply_axis(template: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    """Return ``template`` with one parameter replaced.

    ``doppler_ratio`` sets every S->R Doppler to ``value`` times the
    matching R->D Doppler; ``L`` replicates relay 1's hops ``value`` times;
    ``threshold`` and ``gamma`` replace those scalars (threshold in linear
    SNR units).
    """
    top = template.topology
    if axis == "doppler_ratio":
        ratio = float(value)
        if not ratio > 0:
            raise ConfigurationError(f"doppler_ratio must be positive, got {value!r}")
        relays = tuple((LinkParams(sr.omega, ratio * rd.doppler_hz), rd) for sr, rd in top.relays)
        cfg = replace(template, topology=RelayTopology(relays, top.gamma))
    elif axis == "L":
        if int(value) != value or value < 2:
            raise ConfigurationError(f"L must be an integer >= 2, got {value!r}")
        cfg = replace(template, topology=RelayTopology(tuple([top.relays[0]] * int(value)), top.gamma))
    elif axis == "threshold":
        cfg = replace(template, threshold=SwitchThreshold(float(value)))
    elif axis == "gamma":
        cfg = replace(template, topology=RelayTopology(top.relays, float(value)))
    else:
        raise ConfigurationError(f"unknown sweep axis {axis!r}; expected one of {', '.join(SWEEP_AXES)}")
    return replace(cfg, trace=_fit_sample_rate(cfg.trace, cfg.topology))


@dataclass(frozen=True)
class SweepRow:
    param_name: str
    param_value: float
    result: ExperimentResult


def sweep(template: ExperimentConfig, axis: str, values: Sequence, simulate: bool = True, workers=None) -> list:
    if axis not in SWEEP_AXES:
        raise ConfigurationError(f"unknown sweep axis {axis!r}; expected one of {', '.join(SWEEP_AXES)}")
    rows = []
    for v in values:
        cfg = apply_axis(template, axis, v)
        result = run_experiment(cfg, workers) if simulate else analytic_only(cfg)
        rows.append(SweepRow(axis, float(v), result))
    return rows


# --- worst case ---------------------------------------------------------------


@dataclass(frozen=True)
class WorstCaseComparison:
    threshold: SwitchThreshold
    dssc: ExperimentResult
    or_: ExperimentResult
    analytic_dssc_rate: float
    analytic_or_rate: float

    @property
    def analytic_ordering_holds(self) -> bool:
        return self.analytic_dssc_rate < self.analytic_or_rate

    @property
    def simulated_ordering_holds(self) -> bool:
        return self.dssc.report("switch_rate").sim_mean < self.or_.report("switch_rate").sim_mean


def compare_worst_case(
    topology: RelayTopology,
    trace: TraceConfig,
    replications: int = 20,
    base_seed: int = 0,
    simulate: bool = True,
    workers=None,
) -> WorstCaseComparison:
    """DSSC-B at its rate-maximising threshold against OR on the same topology.

    Both schemes see identical fading traces (same seeds).
    """
    t_star = cf.worst_case_threshold(topology)
    dssc_cfg = ExperimentConfig(topology, Scheme.DSSC_B, trace, threshold=t_star, replications=replications, base_seed=base_seed)
    or_cfg = ExperimentConfig(topology, Scheme.OR, trace, replications=replications, base_seed=base_seed)
    run = (lambda c: run_experiment(c, workers)) if simulate else analytic_only
    return WorstCaseComparison(
        threshold=t_star,
        dssc=run(dssc_cfg),
        or_=run(or_cfg),
        analytic_dssc_rate=cf.dssc_switch_rate(topology, t_star),
        analytic_or_rate=cf.or_switch_rate(topology),
    )
