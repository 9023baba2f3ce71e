"""Data behind the five published figures, one CSV per curve.

Rates are divided by ``pi * max F`` of the scenario at each point and
activation times multiplied by it, so that the i.i.d. two-relay OR value is
exactly 1. Layouts:

1. switching rate vs F_SR/F_RD, L=2, Gamma*Omega_SR = Gamma*Omega_RD +/- 10 dB,
   OR against DSSC-B at its worst-case threshold;
2. OR switching rate vs L (i.i.d., common F);
3. activation time of relay 1 for the layout of figure 1;
4. OR activation time vs L;
5. switching rate vs T/Gamma with F_SR = 2 F_RD, both dB offsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import closedform as cf
from . import report
from .closedform import RelayTopology
from .fading import DEFAULT_OVERSAMPLING, LinkParams, TraceConfig
from .montecarlo import ExperimentConfig, Scheme, analytic_only, run_experiment

F_RD_HZ = 10.0
OMEGA_RD = 1.0
DB_OFFSETS = (10.0, -10.0)
DOPPLER_RATIOS = tuple(np.geomspace(0.1, 10.0, 21))
RELAY_COUNTS = tuple(range(2, 11))
THRESHOLDS = tuple(np.geomspace(1e-3, 10.0, 20))
FIGURES = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class SimSettings:
    replications: int = 4
    duration_s: float = 10.0
    base_seed: int = 0
    workers: int | None = None


@dataclass(frozen=True)
class Curve:
    name: str
    comments: tuple
    rows: tuple


def _offset_tag(db: float) -> str:
    return f"{'plus' if db > 0 else 'minus'}{abs(db):g}dB"


def _unbalanced_pair(db: float, f_sr: float, f_rd: float = F_RD_HZ) -> RelayTopology:
    sr = LinkParams(OMEGA_RD * 10.0 ** (db / 10.0), f_sr)
    rd = LinkParams(OMEGA_RD, f_rd)
    return RelayTopology.symmetric_pair(sr, rd, gamma=1.0)


def _config(top: RelayTopology, scheme: Scheme, sim: SimSettings, threshold=None) -> ExperimentConfig:
    trace = TraceConfig(DEFAULT_OVERSAMPLING * top.max_doppler_hz, sim.duration_s)
    return ExperimentConfig(top, scheme, trace, threshold=threshold, replications=sim.replications, base_seed=sim.base_seed)


def _rows(cfg, quantity, param_name, value, scale, sim: SimSettings | None):
    result = run_experiment(cfg, sim.workers) if sim else analytic_only(cfg)
    return report.rows_from_result(result, param_name, value, scale, simulated=sim is not None, quantities={quantity})


def _norm_comment(kind: str) -> str:
    if kind == "rate":
        return "normalisation: rates divided by pi * max Doppler (Hz) of the scenario at each point"
    return "normalisation: activation times multiplied by pi * max Doppler (Hz) of the scenario at each point"


def _doppler_figure(fig: int, quantity: str, kind: str, sim) -> list:
    curves = []
    for db in DB_OFFSETS:
        or_rows, dssc_rows = [], []
        for ratio in DOPPLER_RATIOS:
            top = _unbalanced_pair(db, ratio * F_RD_HZ)
            f_max = top.max_doppler_hz
            scale = 1.0 / (math.pi * f_max) if kind == "rate" else math.pi * f_max
            t_star = cf.worst_case_threshold(top)
            or_rows += _rows(_config(top, Scheme.OR, sim or SimSettings()), quantity, "doppler_ratio", ratio, scale, sim)
            dssc_rows += _rows(
                _config(top, Scheme.DSSC_B, sim or SimSettings(), t_star), quantity, "doppler_ratio", ratio, scale, sim
            )
        tag = _offset_tag(db)
        note = f"Gamma*Omega_SR = Gamma*Omega_RD {'+' if db > 0 else '-'} {abs(db):g} dB, F_RD = {F_RD_HZ:g} Hz"
        curves.append(Curve(f"fig{fig}_or_{tag}", (_norm_comment(kind), note), tuple(or_rows)))
        curves.append(
            Curve(f"fig{fig}_dssc_{tag}", (_norm_comment(kind), note, "DSSC-B at its worst-case threshold"), tuple(dssc_rows))
        )
    return curves


def _relay_count_figure(fig: int, quantity: str, kind: str, sim) -> list:
    rows = []
    for l in RELAY_COUNTS:
        top = RelayTopology.iid(l, OMEGA_RD, F_RD_HZ)
        scale = 1.0 / (math.pi * F_RD_HZ) if kind == "rate" else math.pi * F_RD_HZ
        rows += _rows(_config(top, Scheme.OR, sim or SimSettings()), quantity, "L", l, scale, sim)
    note = f"i.i.d. hops, Omega = {OMEGA_RD:g}, F = {F_RD_HZ:g} Hz"
    return [Curve(f"fig{fig}_or", (_norm_comment(kind), note), tuple(rows))]


def _threshold_figure(sim) -> list:
    curves = []
    for db in DB_OFFSETS:
        top = _unbalanced_pair(db, 2.0 * F_RD_HZ)
        scale = 1.0 / (math.pi * top.max_doppler_hz)
        or_rows, dssc_rows = [], []
        base = sim or SimSettings()
        or_result = run_experiment(_config(top, Scheme.OR, base), sim.workers) if sim else analytic_only(_config(top, Scheme.OR, base))
        for t in THRESHOLDS:
            or_rows += report.rows_from_result(
                or_result, "threshold_over_gamma", t, scale, simulated=sim is not None, quantities={"switch_rate"}
            )
            dssc_rows += _rows(_config(top, Scheme.DSSC_B, base, t), "switch_rate", "threshold_over_gamma", t, scale, sim)
        tag = _offset_tag(db)
        note = f"Gamma*Omega_SR = Gamma*Omega_RD {'+' if db > 0 else '-'} {abs(db):g} dB, F_SR = 2 F_RD = {2 * F_RD_HZ:g} Hz"
        curves.append(Curve(f"fig5_or_{tag}", (_norm_comment("rate"), note), tuple(or_rows)))
        curves.append(Curve(f"fig5_dssc_{tag}", (_norm_comment("rate"), note), tuple(dssc_rows)))
    return curves


def figure_curves(figure: int, sim: SimSettings | None = None) -> list:
    """Curves of ``figure``; simulated columns are filled only when ``sim`` is given."""
    if figure == 1:
        return _doppler_figure(1, "switch_rate", "rate", sim)
    if figure == 2:
        return _relay_count_figure(2, "switch_rate", "rate", sim)
    if figure == 3:
        return _doppler_figure(3, "activation_time_1", "time", sim)
    if figure == 4:
        return _relay_count_figure(4, "activation_time", "time", sim)
    if figure == 5:
        return _threshold_figure(sim)
    raise ValueError(f"unknown figure {figure!r}; expected one of {FIGURES}")


def write_figure(figure: int, out_dir, sim: SimSettings | None = None) -> list:
    paths = []
    for curve in figure_curves(figure, sim):
        paths.append(report.write(f"{out_dir}/{curve.name}.csv", curve.rows, curve.comments))
    return paths


__all__ = ["SimSettings", "Curve", "figure_curves", "write_figure", "FIGURES"]
