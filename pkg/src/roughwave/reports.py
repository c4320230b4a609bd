"""CSV and JSON report writers.

Every report is a list of flat records sharing one column set, followed by
certificate records and a final verdict record. Numbers are written with 17
significant digits so that reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .config import ExperimentConfig, ReportFormat

COLUMNS = ("command", "point", "kappa", "hurst_space", "hurst_time", "quantity", "abscissa",
           "value", "error_estimate", "bound", "verdict")


@dataclass
class Report:
    command: str
    records: list[dict[str, Any]] = field(default_factory=list)
    certificates: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.certificates)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def fmt_number(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return fmt_number(v)
    if isinstance(v, float):
        return float(format(v, ".17g"))
    return v


def _rows(report: Report) -> list[dict[str, Any]]:
    rows = list(report.records)
    for c in report.certificates:
        rows.append({
            "command": report.command, "point": c.get("point"), "quantity": f"certificate:{c['id']}",
            "abscissa": c.get("detail", ""), "value": c.get("lhs"), "error_estimate": c.get("rel_error"),
            "bound": c.get("rhs"), "verdict": "PASS" if c["passed"] else "FAIL",
        })
    rows.append({"command": report.command, "quantity": "verdict", "verdict": report.verdict})
    return rows


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in _rows(report):
        w.writerow([fmt_number(row.get(c)) for c in COLUMNS])
    return buf.getvalue()


def config_echo(cfg: ExperimentConfig) -> dict[str, Any]:
    q = cfg.quadrature
    return {
        "command": cfg.command.value,
        "points": [[p.kappa, p.hurst_space, p.hurst_time, p.equation.value] for p in cfg.points],
        "horizons": list(cfg.horizons),
        "offsets": list(cfg.offsets),
        "quadrature": {
            "tolerance": q.tolerance, "max_subdivisions": q.max_subdivisions,
            "frequency_cutoff": q.frequency_cutoff, "tail_policy": q.tail_policy.value,
            "probe_points": list(q.probe_points),
        },
        "orders": list(cfg.orders),
        "samples": cfg.samples,
        "format": cfg.format.value,
    }


def render_json(report: Report, cfg: ExperimentConfig) -> str:
    doc = {
        "metadata": {"artifact_version": __version__, "seed": cfg.seed, "config": config_echo(cfg)},
        "records": [{c: _json_value(r.get(c)) for c in COLUMNS} for r in report.records],
        "certificates": [{k: _json_value(v) for k, v in c.items()} for c in report.certificates],
        "verdict": report.verdict,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_report(report: Report, cfg: ExperimentConfig) -> Path:
    text = render_csv(report) if cfg.format is ReportFormat.CSV else render_json(report, cfg)
    path = Path(cfg.output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
