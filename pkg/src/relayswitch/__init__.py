"""Relay switching rates of opportunistic relaying (OR) and DSSC-B.

Closed forms live in :mod:`relayswitch.closedform`, trace synthesis in
:mod:`relayswitch.fading`, the selection rules in :mod:`relayswitch.protocol`
and replicated experiments in :mod:`relayswitch.montecarlo`.
"""

from ._kernels import BACKEND
from .closedform import (
    DsscStationary,
    MinEquivalentParams,
    RelayTopology,
    SwitchThreshold,
    dssc_activation_time,
    dssc_crossing_rate,
    dssc_stationary,
    dssc_switch_rate,
    f_z_at_zero,
    omega_min,
    or_activation_time_iid_L,
    or_activation_time_inid_2,
    or_switch_rate,
    or_switch_rate_iid_2,
    or_switch_rate_iid_L,
    or_switch_rate_inid_2,
    steady_state_or,
    worst_case_threshold,
)
from .errors import (
    ConfigurationError,
    DomainError,
    InsufficientDataError,
    RelaySwitchError,
    ResolutionError,
    UnsupportedTopologyError,
)
from .fading import FadingTrace, LinkParams, TraceConfig, generate_trace, measure_lcr, validate_rayleigh
from .montecarlo import ExperimentConfig, RateReport, Scheme, compare_worst_case, run_experiment, sweep
from .protocol import DsscState, SelectionMetric, SelectionTrace, dssc_step, or_select, run_dssc, run_or, summarize

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigurationError",
    "DomainError",
    "DsscState",
    "DsscStationary",
    "ExperimentConfig",
    "FadingTrace",
    "InsufficientDataError",
    "LinkParams",
    "MinEquivalentParams",
    "RateReport",
    "RelaySwitchError",
    "RelayTopology",
    "ResolutionError",
    "Scheme",
    "SelectionMetric",
    "SelectionTrace",
    "SwitchThreshold",
    "TraceConfig",
    "UnsupportedTopologyError",
    "compare_worst_case",
    "dssc_activation_time",
    "dssc_crossing_rate",
    "dssc_stationary",
    "dssc_step",
    "dssc_switch_rate",
    "f_z_at_zero",
    "generate_trace",
    "measure_lcr",
    "omega_min",
    "or_activation_time_iid_L",
    "or_activation_time_inid_2",
    "or_select",
    "or_switch_rate",
    "or_switch_rate_iid_2",
    "or_switch_rate_iid_L",
    "or_switch_rate_inid_2",
    "run_dssc",
    "run_experiment",
    "run_or",
    "steady_state_or",
    "summarize",
    "sweep",
    "validate_rayleigh",
    "worst_case_threshold",
]
