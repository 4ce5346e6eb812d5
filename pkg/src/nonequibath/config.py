"""JSON run configuration.

Example::

    {
      "schema_version": 1,
      "system": {"energies": [0, 1, 3],
                 "dipole": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]},
      "field": {"mode": "table-beta",
                "entries": [{"omega": 1, "I": 1, "beta": 2},
                            {"omega": 3, "I": 1, "beta": 2.5},
                            {"omega": 2, "I": 1, "beta": 3}]},
      "numerics": {"dt": null, "t_final": null, "tol": 1e-12, "stride": null},
      "initial": [1, 0, 0],
      "sweep": {"param": "beta2", "from": 2, "to": 6, "steps": 9}
    }

Field modes: ``table-N`` entries carry ``N``, ``table-beta`` entries carry
``beta``, ``gibbs`` takes a top-level ``beta0`` and entries with ``omega``
and ``I`` only. Sweep ``param`` is ``beta1``/``beta2``/``beta3`` (3-level
labels) or ``beta`` together with an explicit ``omega``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .errors import ConfigError
from .field import MODES, FieldSpec
from .levels import LevelSystem

SCHEMA_VERSION = 1
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class SweepSpec:
    omega: float
    start: float
    stop: float
    steps: int
    label: str

    def values(self) -> list[float]:
        if self.steps == 0:
            return []
        if self.steps == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.steps - 1)
        vals = [self.start + k * step for k in range(self.steps)]
        vals[-1] = self.stop
        return vals


@dataclass(frozen=True)
class RunConfig:
    system: LevelSystem
    field: FieldSpec
    dt: float | None = None
    t_final: float | None = None
    tol: float = DEFAULT_TOL
    generic_tol: float | None = None
    stride: int | None = None
    initial: tuple[float, ...] | None = None
    sweep: SweepSpec | None = None
    source: dict = dc_field(default_factory=dict, compare=False, repr=False)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("", f"cannot read config {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from exc
    return parse_config(raw)


def _number(value, where, *, positive=False, nonneg=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(where, "must be finite")
    if positive and not value > 0:
        raise ConfigError(where, f"must be > 0, got {value!r}")
    if nonneg and not value >= 0:
        raise ConfigError(where, f"must be >= 0, got {value!r}")
    return value


def _require(mapping, key, where):
    if not isinstance(mapping, dict):
        raise ConfigError(where, "expected an object")
    if key not in mapping:
        raise ConfigError(f"{where}.{key}" if where else key, "missing required key")
    return mapping[key]


def parse_config(raw) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("", "top level must be a JSON object")
    version = _require(raw, "schema_version", "")
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {version!r}, expected {SCHEMA_VERSION}")

    system = _parse_system(_require(raw, "system", ""))
    field = _parse_field(_require(raw, "field", ""))

    numerics = raw.get("numerics") or {}
    if not isinstance(numerics, dict):
        raise ConfigError("numerics", "expected an object")
    dt = _number(numerics.get("dt"), "numerics.dt", positive=True, allow_none=True)
    t_final = _number(numerics.get("t_final"), "numerics.t_final", nonneg=True, allow_none=True)
    tol = _number(numerics.get("tol", DEFAULT_TOL), "numerics.tol", nonneg=True)
    generic_tol = _number(numerics.get("generic_tol"), "numerics.generic_tol", positive=True, allow_none=True)
    stride = numerics.get("stride")
    if stride is not None and (isinstance(stride, bool) or not isinstance(stride, int) or stride < 1):
        raise ConfigError("numerics.stride", f"must be a positive integer, got {stride!r}")

    initial = raw.get("initial")
    if initial is not None:
        if not isinstance(initial, list) or len(initial) != system.n_levels:
            raise ConfigError("initial", f"expected a list of {system.n_levels} populations")
        initial = tuple(_number(x, f"initial[{k}]", nonneg=True) for k, x in enumerate(initial))
        if abs(sum(initial) - 1.0) > 1e-12:
            raise ConfigError("initial", "populations must sum to 1")

    sweep = raw.get("sweep")
    if sweep is not None:
        sweep = _parse_sweep(sweep, system)

    return RunConfig(system, field, dt, t_final, tol, generic_tol, stride, initial, sweep, raw)


def _parse_system(raw) -> LevelSystem:
    energies = _require(raw, "energies", "system")
    dipole = _require(raw, "dipole", "system")
    if not isinstance(energies, list):
        raise ConfigError("system.energies", "expected a list")
    energies = [_number(x, f"system.energies[{k}]") for k, x in enumerate(energies)]
    if not isinstance(dipole, list) or any(not isinstance(row, list) for row in dipole):
        raise ConfigError("system.dipole", "expected a list of lists")
    dipole = [[_number(x, f"system.dipole[{i}][{j}]") for j, x in enumerate(row)]
              for i, row in enumerate(dipole)]
    try:
        return LevelSystem(energies, dipole)
    except ValueError as exc:
        raise ConfigError("system", str(exc)) from exc


def _parse_field(raw) -> FieldSpec:
    mode = _require(raw, "mode", "field")
    if mode not in MODES:
        raise ConfigError("field.mode", f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    entries = _require(raw, "entries", "field")
    if not isinstance(entries, list):
        raise ConfigError("field.entries", "expected a list")
    rows = []
    for k, entry in enumerate(entries):
        where = f"field.entries[{k}]"
        omega = _number(_require(entry, "omega", where), f"{where}.omega", positive=True)
        intensity = _number(_require(entry, "I", where), f"{where}.I", nonneg=True)
        if mode == "table-N":
            rows.append((omega, intensity, _number(_require(entry, "N", where), f"{where}.N", nonneg=True)))
        elif mode == "table-beta":
            rows.append((omega, intensity, _number(_require(entry, "beta", where), f"{where}.beta", positive=True)))
        else:
            rows.append((omega, intensity))
    try:
        if mode == "table-N":
            return FieldSpec.from_occupations(rows)
        if mode == "table-beta":
            return FieldSpec.from_betas(rows)
        beta0 = _number(_require(raw, "beta0", "field"), "field.beta0", positive=True)
        return FieldSpec.gibbs(beta0, rows)
    except ValueError as exc:
        raise ConfigError("field", str(exc)) from exc


def _parse_sweep(raw, system) -> SweepSpec:
    param = _require(raw, "param", "sweep")
    if param in ("beta1", "beta2", "beta3"):
        if system.n_levels != 3:
            raise ConfigError("sweep.param", f"{param!r} labels need a 3-level system; use 'beta' with 'omega'")
        e = system.energies
        omega = {"beta1": e[1] - e[0], "beta2": e[2] - e[0], "beta3": e[2] - e[1]}[param]
        label = param
    elif param == "beta":
        omega = _number(_require(raw, "omega", "sweep"), "sweep.omega", positive=True)
        label = "beta"
    else:
        raise ConfigError("sweep.param", f"unknown sweep parameter {param!r}")
    start = _number(_require(raw, "from", "sweep"), "sweep.from", positive=True)
    stop = _number(_require(raw, "to", "sweep"), "sweep.to", positive=True)
    steps = _require(raw, "steps", "sweep")
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 0:
        raise ConfigError("sweep.steps", f"must be a non-negative integer, got {steps!r}")
    return SweepSpec(float(omega), start, stop, steps, label)
