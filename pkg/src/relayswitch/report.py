"""CSV rows shared by the CLI commands and the figure generator."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

HEADER = ("scheme", "quantity", "param_name", "param_value", "analytic", "sim_mean", "sim_stderr", "n_events", "seed")


def fmt(x) -> str:
    """Full-precision scientific notation; empty for missing values."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17e}"


@dataclass(frozen=True)
class Row:
    scheme: str
    quantity: str
    param_name: str
    param_value: float | None
    analytic: float | None
    sim_mean: float | None
    sim_stderr: float | None
    n_events: int | None
    seed: int

    def cells(self) -> list:
        return [
            self.scheme,
            self.quantity,
            self.param_name,
            fmt(self.param_value),
            fmt(self.analytic),
            fmt(self.sim_mean),
            fmt(self.sim_stderr),
            "" if self.n_events is None else str(int(self.n_events)),
            str(int(self.seed)),
        ]


def rows_from_result(result, param_name="", param_value=None, scale=1.0, simulated=True, quantities=None) -> list:
    """One :class:`Row` per report of an ``ExperimentResult``, optionally rescaled."""
    cfg = result.config
    out = []
    for r in result.reports:
        if quantities is not None and r.quantity not in quantities:
            continue
        out.append(
            Row(
                scheme=cfg.scheme.value,
                quantity=r.quantity,
                param_name=param_name,
                param_value=param_value,
                analytic=None if r.analytic is None else r.analytic * scale,
                sim_mean=r.sim_mean * scale if simulated else None,
                sim_stderr=r.sim_stderr * scale if simulated else None,
                n_events=r.n_events if simulated else None,
                seed=cfg.base_seed,
            )
        )
    return out


def render(rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        writer.writerow(row.cells())
    return buf.getvalue()


def write(path, rows, comments=()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(render(rows, comments))
    return path


def read(path) -> list:
    """Parse a CSV written by :func:`write` back into dictionaries (comments skipped)."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))
