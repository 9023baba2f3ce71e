"""JSON experiment files: schema, unit conversion and round-trip dumping.

Power-like quantities (``omega``, ``gamma``, ``threshold``) are written
either as a bare number (linear) or as ``{"value": x, "unit": "dB"|"linear"}``
with ``linear = 10 ** (dB / 10)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .closedform import RelayTopology, SwitchThreshold
from .errors import ConfigurationError
from .fading import DEFAULT_OVERSAMPLING, RNG_ALGORITHM, LinkParams, TraceConfig
from .montecarlo import SWEEP_AXES, ExperimentConfig, Scheme
from .protocol import SelectionMetric

_POWER = {
    "oneOf": [
        {"type": "number"},
        {
            "type": "object",
            "properties": {"value": {"type": "number"}, "unit": {"enum": ["dB", "linear"]}},
            "required": ["value", "unit"],
            "additionalProperties": False,
        },
    ]
}

_HOP = {
    "type": "object",
    "properties": {"omega": _POWER, "doppler_hz": {"type": "number", "exclusiveMinimum": 0}},
    "required": ["omega", "doppler_hz"],
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "scheme": {"enum": [s.value for s in Scheme]},
        "metric": {"enum": [m.value for m in SelectionMetric]},
        "gamma": _POWER,
        "relays": {
            "type": "array",
            "minItems": 2,
            "items": {
                "type": "object",
                "properties": {"sr": _HOP, "rd": _HOP},
                "required": ["sr", "rd"],
                "additionalProperties": False,
            },
        },
        "threshold": _POWER,
        "trace": {
            "type": "object",
            "properties": {
                "sample_rate_hz": {"type": "number", "exclusiveMinimum": 0},
                "duration_s": {"type": "number", "exclusiveMinimum": 0},
                "num_sinusoids": {"type": "integer", "minimum": 8},
            },
            "required": ["duration_s"],
            "additionalProperties": False,
        },
        "replications": {"type": "integer", "minimum": 1},
        "base_seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "period_samples": {"type": "integer", "minimum": 1},
        "rng": {"const": RNG_ALGORITHM},
        "sweep": {
            "type": "object",
            "properties": {
                "axis": {"enum": list(SWEEP_AXES)},
                "values": {"type": "array", "minItems": 1, "items": {"type": "number"}},
            },
            "required": ["axis", "values"],
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {"dir": {"type": "string"}},
            "additionalProperties": False,
        },
    },
    "required": ["scheme", "relays", "trace"],
    "additionalProperties": False,
}


def to_linear(q) -> float:
    if isinstance(q, dict):
        return 10.0 ** (q["value"] / 10.0) if q["unit"] == "dB" else float(q["value"])
    return float(q)


@dataclass(frozen=True)
class LoadedConfig:
    experiment: ExperimentConfig
    sweep_axis: str | None = None
    sweep_values: tuple = ()
    output_dir: str | None = None


def _location(err: jsonschema.ValidationError) -> str:
    path = "/".join(str(p) for p in err.absolute_path)
    return path or "<root>"


def parse_config(doc: dict) -> LoadedConfig:
    """Validate ``doc`` and build the experiment it describes."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = "; ".join(f"{_location(e)}: {e.message}" for e in errors)
        raise ConfigurationError(f"invalid config: {msgs}")
    try:
        relays = tuple(
            (
                LinkParams(to_linear(r["sr"]["omega"]), float(r["sr"]["doppler_hz"])),
                LinkParams(to_linear(r["rd"]["omega"]), float(r["rd"]["doppler_hz"])),
            )
            for r in doc["relays"]
        )
        topology = RelayTopology(relays, to_linear(doc.get("gamma", 1.0)))
        tr = doc["trace"]
        rate = tr.get("sample_rate_hz", DEFAULT_OVERSAMPLING * topology.max_doppler_hz)
        trace = TraceConfig(float(rate), float(tr["duration_s"]), int(tr.get("num_sinusoids", 64)))
        threshold = SwitchThreshold(to_linear(doc["threshold"])) if "threshold" in doc else None
        exp = ExperimentConfig(
            topology=topology,
            scheme=Scheme(doc["scheme"]),
            trace=trace,
            metric=SelectionMetric(doc.get("metric", SelectionMetric.MIN_EQUIVALENT.value)),
            threshold=threshold,
            replications=int(doc.get("replications", 20)),
            base_seed=int(doc.get("base_seed", 0)),
            period_samples=int(doc.get("period_samples", 1)),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from exc
    sweep = doc.get("sweep")
    return LoadedConfig(
        experiment=exp,
        sweep_axis=sweep["axis"] if sweep else None,
        sweep_values=tuple(sweep["values"]) if sweep else (),
        output_dir=doc.get("output", {}).get("dir"),
    )


def load_config(path) -> LoadedConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: not valid JSON ({exc})") from exc
    return parse_config(doc)


def dump_config(loaded: LoadedConfig) -> dict:
    """Config document (linear units, explicit defaults) that re-parses to ``loaded``."""
    exp = loaded.experiment
    doc = {
        "scheme": exp.scheme.value,
        "metric": exp.metric.value,
        "gamma": exp.topology.gamma,
        "relays": [
            {
                "sr": {"omega": sr.omega, "doppler_hz": sr.doppler_hz},
                "rd": {"omega": rd.omega, "doppler_hz": rd.doppler_hz},
            }
            for sr, rd in exp.topology.relays
        ],
        "trace": {
            "sample_rate_hz": exp.trace.sample_rate_hz,
            "duration_s": exp.trace.duration_s,
            "num_sinusoids": exp.trace.num_sinusoids,
        },
        "replications": exp.replications,
        "base_seed": exp.base_seed,
        "period_samples": exp.period_samples,
        "rng": RNG_ALGORITHM,
    }
    if exp.threshold is not None:
        doc["threshold"] = exp.threshold.t
    if loaded.sweep_axis is not None:
        doc["sweep"] = {"axis": loaded.sweep_axis, "values": list(loaded.sweep_values)}
    if loaded.output_dir is not None:
        doc["output"] = {"dir": loaded.output_dir}
    return doc
