"""Experiment configuration from flat ``key = value`` files and overrides."""

from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import InputError
from .params import Equation, ModelParams
from .quadrature import QuadratureSpec, TailPolicy
from .regularity import DYADIC_OFFSETS

OUTPUT_DIR_ENV = "ROUGHWAVE_OUTPUT_DIR"
DEFAULT_SEED = 20240917


class Command(str, enum.Enum):
    VALIDATE = "validate"
    MOMENTS = "moments"
    LOWER = "lower"
    HOLDER = "holder"
    THRESHOLD = "threshold"
    LEMMAS = "lemmas"
    IDENTITY = "identity"
    CHAOS = "chaos"


class ReportFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


DEFAULT_HORIZONS = {
    Command.MOMENTS: (2.0, 4.0, 8.0, 16.0),
    Command.LOWER: (2.0, 4.0, 8.0, 16.0),
    Command.HOLDER: (1.0,),
    Command.CHAOS: (0.5, 1.0, 2.0),
    Command.THRESHOLD: (1.0,),
}


@dataclass(frozen=True)
class ParamPoint:
    kappa: float
    hurst_space: float
    hurst_time: float = 0.5
    equation: Equation = Equation.WAVE

    def model(self) -> ModelParams:
        return ModelParams(self.kappa, self.hurst_space, self.hurst_time, equation=self.equation)


@dataclass(frozen=True)
class ExperimentConfig:
    command: Command
    points: tuple[ParamPoint, ...]
    horizons: tuple[float, ...]
    offsets: tuple[float, ...]
    quadrature: QuadratureSpec
    seed: int
    output_path: Path
    format: ReportFormat
    orders: tuple[int, ...] = (1, 2)
    samples: int = 1 << 18
    workers: int = 1
    raw: Mapping[str, str] = field(default_factory=dict)

    @property
    def params(self) -> ModelParams:
        return self.points[0].model()


def parse_config_text(text: str) -> dict[str, str]:
    """``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise InputError(f"line {lineno}: empty key")
        out[key.lower().replace("-", "_")] = value
    return out


def parse_overrides(items: Iterable[str]) -> dict[str, str]:
    return parse_config_text("\n".join(items))


def _floats(value: str, key: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError as exc:
        raise InputError(f"{key}: expected comma-separated numbers, got {value!r}") from exc
    if not vals:
        raise InputError(f"{key}: no values")
    return vals


def _ints(value: str, key: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in value.split(",") if v.strip())
    except ValueError as exc:
        raise InputError(f"{key}: expected comma-separated integers, got {value!r}") from exc


KNOWN_KEYS = {
    "command", "kappa", "hurst_space", "hurst_time", "equation", "horizons", "offsets",
    "tolerance", "max_subdivisions", "frequency_cutoff", "tail_policy", "probe_points",
    "seed", "output", "format", "orders", "samples", "workers",
}


def build_config(values: Mapping[str, str], command: str | None = None) -> ExperimentConfig:
    """Validate a merged key-value mapping into an ExperimentConfig."""
    unknown = sorted(set(values) - KNOWN_KEYS)
    if unknown:
        raise InputError(f"unknown config keys: {', '.join(unknown)}")
    name = command or values.get("command")
    if name is None:
        raise InputError("no command given")
    try:
        cmd = Command(name.strip().lower())
    except ValueError as exc:
        raise InputError(f"unknown command {name!r}") from exc

    kappas = _floats(values.get("kappa", "2.0"), "kappa")
    hs = _floats(values.get("hurst_space", "0.3"), "hurst_space")
    h0s = _floats(values.get("hurst_time", "0.5"), "hurst_time")
    try:
        eq = Equation(values.get("equation", "wave").strip().lower())
    except ValueError as exc:
        raise InputError(f"unknown equation {values['equation']!r}") from exc
    points = tuple(ParamPoint(k, h, h0, eq) for k, h, h0 in itertools.product(kappas, hs, h0s))

    horizons = _floats(values["horizons"], "horizons") if "horizons" in values \
        else DEFAULT_HORIZONS.get(cmd, (1.0,))
    if any(not t > 0 for t in horizons) or any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise InputError("horizons must be positive and increasing")
    offsets = _floats(values["offsets"], "offsets") if "offsets" in values else DYADIC_OFFSETS
    if any(not o > 0 for o in offsets):
        raise InputError("offsets must be positive")

    try:
        quad = QuadratureSpec(
            tolerance=float(values.get("tolerance", 1e-8)),
            max_subdivisions=int(values.get("max_subdivisions", 400_000)),
            frequency_cutoff=float(values.get("frequency_cutoff", 50.0)),
            tail_policy=TailPolicy(values.get("tail_policy", "power_extrapolate").strip().lower()),
            probe_points=_floats(values["probe_points"], "probe_points") if "probe_points" in values else (),
        )
        seed = int(values.get("seed", DEFAULT_SEED))
        samples = int(values.get("samples", 1 << 18))
        workers = int(values.get("workers", 1))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if not 0 <= seed < 2**64:
        raise InputError("seed must be a 64-bit unsigned integer")
    if samples < 2 or workers < 1:
        raise InputError("samples must be at least 2 and workers at least 1")
    orders = _ints(values.get("orders", "1,2"), "orders")
    if not orders or any(not 1 <= n <= 4 for n in orders):
        raise InputError("orders must lie in 1..4")

    try:
        fmt = ReportFormat(values.get("format", "csv").strip().lower())
    except ValueError as exc:
        raise InputError(f"unknown format {values['format']!r}") from exc
    if "output" in values:
        out = Path(values["output"])
    else:
        out = Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / f"{cmd.value}.{fmt.value}"

    for v in horizons + offsets:
        if not math.isfinite(v):
            raise InputError("horizons and offsets must be finite")
    return ExperimentConfig(cmd, points, horizons, offsets, quad, seed, out, fmt,
                            orders, samples, workers, dict(values))


def load_config(path: str | os.PathLike | None, overrides: Mapping[str, str],
                command: str | None = None) -> ExperimentConfig:
    values: dict[str, str] = {}
    if path is not None:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise InputError(f"cannot read config {path}: {exc}") from exc
    values.update(overrides)
    return build_config(values, command)
