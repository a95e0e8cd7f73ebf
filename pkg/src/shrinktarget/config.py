"""Experiment configuration: JSON ingestion with field-path diagnostics.

One structured document describes a system, a list of (rate, time set,
target) triples, the tasks to run and the output destination.  Validation
errors carry the JSON path of the offending field (e.g.
``rates[0].phi.tau``), and a validated config is immutable afterwards.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

from .rates import (
    AllTimes,
    Arithmetic,
    EventuallyPeriodic,
    Explicit,
    Exponential,
    ConstantPoint,
    PiecewiseExponential,
    PowerLaw,
    RateError,
    RateExponents,
    RateFunction,
    ShiftTarget,
    SymbolSequence,
    Tabulated,
    TargetSequence,
    TimeSet,
    constant_shift_target,
)
from .symbolic import ShiftOfFiniteType, SoficPresentation, SymbolicError
from .systems import (
    ConstantGap,
    HyperbolicityProfile,
    IntegerMatrixSystem,
    SpectrumError,
)

TASKS = ("analyze", "bounds", "exact", "oracle", "witness")
FORMATS = ("json", "csv")


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def _require(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise ConfigError(f"{path}.{key}", "missing required field")
    return obj[key]


def _as_dict(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected an object, got {type(value).__name__}")
    return value


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(path, f"expected a list, got {type(value).__name__}")
    return value


def _as_number(value: Any, path: str, allow_inf: bool = False) -> float:
    if isinstance(value, str) and allow_inf and value in ("inf", "Infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    return value


SystemSpec = Union[
    IntegerMatrixSystem, ShiftOfFiniteType, SoficPresentation, HyperbolicityProfile
]


@dataclass(frozen=True)
class RateTriple:
    phi: RateFunction | RateExponents
    time_set: TimeSet
    target: TargetSequence


@dataclass(frozen=True)
class OracleParams:
    depth: int = 40
    grid_step: float = 0.01
    grid_min: float | None = None
    grid_max: float | None = None
    stages: int = 12
    eta: float = 0.05


@dataclass(frozen=True)
class ExperimentConfig:
    system: SystemSpec
    system_kind: str
    rates: tuple[RateTriple, ...]
    tasks: tuple[str, ...]
    oracle_params: OracleParams = OracleParams()
    sweep_taus: tuple[float, ...] | None = None
    output_dir: str = "out"
    formats: tuple[str, ...] = ("json",)
    raw: dict = field(default_factory=dict, compare=False)


def _parse_phi(obj: Any, path: str) -> RateFunction | RateExponents:
    d = _as_dict(obj, path)
    kind = _require(d, "kind", path)
    try:
        if kind == "exponential":
            return Exponential(_as_number(_require(d, "tau", path), f"{path}.tau"))
        if kind == "power_law":
            return PowerLaw(_as_number(_require(d, "a", path), f"{path}.a"))
        if kind == "piecewise_exponential":
            taus = [
                _as_number(v, f"{path}.taus[{i}]")
                for i, v in enumerate(_as_list(_require(d, "taus", path), f"{path}.taus"))
            ]
            return PiecewiseExponential(
                _as_int(_require(d, "period", path), f"{path}.period"), tuple(taus)
            )
        if kind == "tabulated":
            values = [
                _as_number(v, f"{path}.values[{i}]")
                for i, v in enumerate(_as_list(_require(d, "values", path), f"{path}.values"))
            ]
            return Tabulated(
                tuple(values), _as_number(_require(d, "tail_tau", path), f"{path}.tail_tau")
            )
        if kind == "exponents":
            return RateExponents(
                _as_number(_require(d, "tau_upper", path), f"{path}.tau_upper", allow_inf=True),
                _as_number(_require(d, "tau_lower", path), f"{path}.tau_lower", allow_inf=True),
            )
    except RateError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.kind", f"unknown rate kind {kind!r}")


def _parse_arithmetic(obj: Any, path: str) -> Arithmetic:
    d = _as_dict(obj, path)
    try:
        return Arithmetic(
            _as_int(_require(d, "offset", path), f"{path}.offset"),
            _as_int(_require(d, "step", path), f"{path}.step"),
        )
    except RateError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_time_set(obj: Any, path: str) -> TimeSet:
    d = _as_dict(obj, path)
    kind = _require(d, "kind", path)
    try:
        if kind == "all":
            return AllTimes()
        if kind == "arithmetic":
            return _parse_arithmetic(d, path)
        if kind == "explicit":
            times = [
                _as_int(v, f"{path}.times[{i}]")
                for i, v in enumerate(_as_list(_require(d, "times", path), f"{path}.times"))
            ]
            tail = d.get("tail")
            return Explicit(
                tuple(times),
                _parse_arithmetic(tail, f"{path}.tail") if tail is not None else None,
            )
    except RateError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.kind", f"unknown time set kind {kind!r}")


def _parse_symbol_sequence(obj: Any, path: str) -> SymbolSequence:
    d = _as_dict(obj, path)
    head = [_as_int(v, f"{path}.head[{i}]") for i, v in enumerate(_as_list(d.get("head", []), f"{path}.head"))]
    cycle = [
        _as_int(v, f"{path}.cycle[{i}]")
        for i, v in enumerate(_as_list(_require(d, "cycle", path), f"{path}.cycle"))
    ]
    try:
        return SymbolSequence(tuple(head), tuple(cycle))
    except RateError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_target(obj: Any, path: str) -> TargetSequence:
    d = _as_dict(obj, path)
    kind = _require(d, "kind", path)
    try:
        if kind == "point":
            pt = [
                _as_number(v, f"{path}.point[{i}]")
                for i, v in enumerate(_as_list(_require(d, "point", path), f"{path}.point"))
            ]
            return ConstantPoint(tuple(pt))
        if kind == "points":
            pre = [
                tuple(_as_number(v, f"{path}.preperiod[{i}][{j}]") for j, v in enumerate(_as_list(p, f"{path}.preperiod[{i}]")))
                for i, p in enumerate(_as_list(d.get("preperiod", []), f"{path}.preperiod"))
            ]
            cyc = [
                tuple(_as_number(v, f"{path}.cycle[{i}][{j}]") for j, v in enumerate(_as_list(p, f"{path}.cycle[{i}]")))
                for i, p in enumerate(_as_list(_require(d, "cycle", path), f"{path}.cycle"))
            ]
            return EventuallyPeriodic(tuple(pre), tuple(cyc))
        if kind == "symbols":
            return constant_shift_target(_parse_symbol_sequence(d, path))
        if kind == "symbol_schedule":
            pre = [
                _parse_symbol_sequence(p, f"{path}.preperiod[{i}]")
                for i, p in enumerate(_as_list(d.get("preperiod", []), f"{path}.preperiod"))
            ]
            cyc = [
                _parse_symbol_sequence(p, f"{path}.cycle[{i}]")
                for i, p in enumerate(_as_list(_require(d, "cycle", path), f"{path}.cycle"))
            ]
            return ShiftTarget(tuple(pre), tuple(cyc))
    except RateError as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.kind", f"unknown target kind {kind!r}")


def _parse_system(obj: Any, path: str) -> tuple[SystemSpec, str]:
    d = _as_dict(obj, path)
    kind = _require(d, "kind", path)
    try:
        if kind == "matrix":
            rows = _as_list(_require(d, "entries", path), f"{path}.entries")
            entries = tuple(
                tuple(_as_int(v, f"{path}.entries[{i}][{j}]") for j, v in enumerate(_as_list(r, f"{path}.entries[{i}]")))
                for i, r in enumerate(rows)
            )
            return IntegerMatrixSystem(entries), "matrix"
        if kind == "sft":
            rows = _as_list(_require(d, "transition", path), f"{path}.transition")
            entries = tuple(
                tuple(_as_int(v, f"{path}.transition[{i}][{j}]") for j, v in enumerate(_as_list(r, f"{path}.transition[{i}]")))
                for i, r in enumerate(rows)
            )
            return ShiftOfFiniteType(entries, d.get("sided", "one")), "sft"
        if kind == "sofic":
            edges = []
            for i, e in enumerate(_as_list(_require(d, "edges", path), f"{path}.edges")):
                e = _as_list(e, f"{path}.edges[{i}]")
                if len(e) != 3:
                    raise ConfigError(f"{path}.edges[{i}]", "expected [from, to, label]")
                edges.append(
                    (
                        _as_int(e[0], f"{path}.edges[{i}][0]"),
                        _as_int(e[1], f"{path}.edges[{i}][1]"),
                        str(e[2]),
                    )
                )
            return (
                SoficPresentation(
                    _as_int(_require(d, "states", path), f"{path}.states"),
                    tuple(edges),
                    d.get("sided", "one"),
                ),
                "sofic",
            )
        if kind == "profile":
            ln_l1 = d.get("ln_l1")
            return (
                HyperbolicityProfile(
                    lambda1=_as_number(_require(d, "lambda1", path), f"{path}.lambda1", allow_inf=True),
                    lambda2=_as_number(_require(d, "lambda2", path), f"{path}.lambda2"),
                    ln_l2=_as_number(_require(d, "ln_l2", path), f"{path}.ln_l2"),
                    h_top=_as_number(_require(d, "h_top", path), f"{path}.h_top"),
                    ln_l1=None if ln_l1 is None else _as_number(ln_l1, f"{path}.ln_l1"),
                    gap=ConstantGap(_as_int(d.get("gap", 0), f"{path}.gap")),
                ),
                "profile",
            )
    except (SymbolicError, SpectrumError) as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.kind", f"unknown system kind {kind!r}")


def _validate_target_against_system(
    triple: RateTriple, system: SystemSpec, kind: str, path: str
) -> None:
    tgt = triple.target
    if kind == "matrix":
        assert isinstance(system, IntegerMatrixSystem)
        points: list[tuple[float, ...]] = []
        if isinstance(tgt, ConstantPoint):
            points = [tgt.point]
        elif isinstance(tgt, EventuallyPeriodic):
            points = list(tgt.preperiod) + list(tgt.cycle)
        else:
            raise ConfigError(path, "torus systems need a point-valued target")
        for pt in points:
            if len(pt) != system.dim:
                raise ConfigError(path, f"point dimension {len(pt)} != torus dimension {system.dim}")
            if any(not (0.0 <= c < 1.0) for c in pt):
                raise ConfigError(path, "torus coordinates must lie in [0, 1)")
    elif kind == "sft":
        assert isinstance(system, ShiftOfFiniteType)
        if not isinstance(tgt, ShiftTarget):
            raise ConfigError(path, "symbolic systems need a symbol-valued target")
        for i, seq in enumerate(tgt.preperiod + tgt.cycle):
            if not system.sequence_admissible(seq):
                raise ConfigError(f"{path}", f"target sequence #{i} is not admissible")
    elif kind == "sofic":
        if not isinstance(tgt, ShiftTarget):
            raise ConfigError(path, "symbolic systems need a symbol-valued target")


def parse_config(raw: dict) -> ExperimentConfig:
    """Validate a raw JSON object into an ExperimentConfig."""
    d = _as_dict(raw, "$")
    system, kind = _parse_system(_require(d, "system", "$"), "$.system")

    rate_objs = _as_list(_require(d, "rates", "$"), "$.rates")
    if not rate_objs:
        raise ConfigError("$.rates", "need at least one rate triple")
    triples = []
    for i, r in enumerate(rate_objs):
        rd = _as_dict(r, f"$.rates[{i}]")
        triple = RateTriple(
            phi=_parse_phi(_require(rd, "phi", f"$.rates[{i}]"), f"$.rates[{i}].phi"),
            time_set=_parse_time_set(
                _require(rd, "time_set", f"$.rates[{i}]"), f"$.rates[{i}].time_set"
            ),
            target=_parse_target(
                _require(rd, "target", f"$.rates[{i}]"), f"$.rates[{i}].target"
            ),
        )
        _validate_target_against_system(triple, system, kind, f"$.rates[{i}].target")
        triples.append(triple)

    task_list = _as_list(d.get("tasks", []), "$.tasks")
    if not task_list and "sweep" not in d:
        raise ConfigError("$.tasks", "task list must be nonempty (or provide a sweep grid)")
    tasks = []
    for i, t in enumerate(task_list):
        if t not in TASKS:
            raise ConfigError(f"$.tasks[{i}]", f"unknown task {t!r}; valid: {TASKS}")
        tasks.append(t)
    for t in ("oracle", "witness"):
        if t in tasks and kind != "sft":
            raise ConfigError("$.tasks", f"task {t!r} requires an SFT system")
    if "oracle" in tasks or "witness" in tasks:
        assert isinstance(system, ShiftOfFiniteType)
        if system.sided != "one":
            raise ConfigError("$.tasks", "oracle/witness tasks need a one-sided SFT")
    if "oracle" in tasks:
        # the cylinder schemes analyze hitting over every time
        for i, triple in enumerate(triples):
            if not isinstance(triple.time_set, AllTimes):
                raise ConfigError(
                    f"$.rates[{i}].time_set", "oracle schemes need the full time set"
                )
    if "exact" in tasks and kind not in ("matrix",):
        raise ConfigError("$.tasks", "task 'exact' requires a matrix system")
    if "analyze" in tasks and kind not in ("matrix", "sft", "sofic"):
        raise ConfigError("$.tasks", "task 'analyze' requires a matrix or symbolic system")

    op = OracleParams()
    if "oracle_params" in d:
        od = _as_dict(d["oracle_params"], "$.oracle_params")
        op = OracleParams(
            depth=_as_int(od.get("depth", op.depth), "$.oracle_params.depth"),
            grid_step=_as_number(od.get("grid_step", op.grid_step), "$.oracle_params.grid_step"),
            grid_min=(
                _as_number(od["grid_min"], "$.oracle_params.grid_min")
                if "grid_min" in od
                else None
            ),
            grid_max=(
                _as_number(od["grid_max"], "$.oracle_params.grid_max")
                if "grid_max" in od
                else None
            ),
            stages=_as_int(od.get("stages", op.stages), "$.oracle_params.stages"),
            eta=_as_number(od.get("eta", op.eta), "$.oracle_params.eta"),
        )
        if op.depth < 4:
            raise ConfigError("$.oracle_params.depth", "depth must be >= 4")
        if op.grid_step <= 0:
            raise ConfigError("$.oracle_params.grid_step", "grid_step must be positive")
        if op.eta <= 0:
            raise ConfigError("$.oracle_params.eta", "eta must be positive")
        if op.stages < 0:
            raise ConfigError("$.oracle_params.stages", "stages must be nonnegative")

    sweep_taus = None
    if "sweep" in d:
        sd = _as_dict(d["sweep"], "$.sweep")
        taus = [
            _as_number(v, f"$.sweep.taus[{i}]")
            for i, v in enumerate(_as_list(_require(sd, "taus", "$.sweep"), "$.sweep.taus"))
        ]
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ConfigError("$.sweep.taus", "tau grid must be sorted strictly increasing")
        if any(t < 0 for t in taus):
            raise ConfigError("$.sweep.taus", "tau values must be nonnegative")
        sweep_taus = tuple(taus)

    out_dir = "out"
    formats: tuple[str, ...] = ("json",)
    if "output" in d:
        od = _as_dict(d["output"], "$.output")
        out_dir = str(od.get("dir", out_dir))
        if "formats" in od:
            fmts = _as_list(od["formats"], "$.output.formats")
            for i, f in enumerate(fmts):
                if f not in FORMATS:
                    raise ConfigError(f"$.output.formats[{i}]", f"unknown format {f!r}")
            if not fmts:
                raise ConfigError("$.output.formats", "formats must be nonempty")
            formats = tuple(fmts)

    return ExperimentConfig(
        system=system,
        system_kind=kind,
        rates=tuple(triples),
        tasks=tuple(tasks),
        oracle_params=op,
        sweep_taus=sweep_taus,
        output_dir=out_dir,
        formats=formats,
        raw=raw,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError("$", f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from exc
    return parse_config(raw)
