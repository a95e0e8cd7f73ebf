"""Batch front end: config in, deterministic machine-readable reports out.

Commands (one per task, plus ``sweep``): analyze, bounds, exact, oracle,
witness, sweep.  Each reads a JSON config, executes, and writes a report
into the output directory:

* ``report.json`` - always (when "json" is among the formats);
* ``sweep.csv`` / ``bounds.csv`` - tabular rows (when "csv" is requested).

Every real number in a report is rendered as a decimal string with 12
significant digits ('.' separator, LF line endings), so reruns of the same
config are byte-identical.  Wall-clock timings go to stderr only, never into
report files.  Nothing in the pipeline draws randomness; ``--seedless``
records that assertion in the report.

Exit codes: 0 all requested tasks produced results (rows whose hypotheses
fail are still results), 1 a task errored, 2 validation/IO errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .bounds import (
    BoundReport,
    HypothesisViolatedError,
    bound_input_from_profile,
    bounds_expanding,
    bounds_hyperbolic_set,
    bounds_one_sided_shift,
    bounds_two_sided_shift,
    covering_bounds,
    exact_expanding_torus,
    exact_toral_automorphism,
    lower_dim_bilipschitz,
    lower_dim_lipschitz,
    lower_entropy_general,
    upper_bounds,
)
from .config import ConfigError, ExperimentConfig, RateTriple, load_config
from .oracle import (
    LimsupCylinderScheme,
    OracleError,
    bracket_critical_exponent,
    construct_witness,
    moran_dimension,
    plan_witness,
    verify_witness,
)
from .rates import (
    AllTimes,
    Exponential,
    RateError,
    RateExponents,
    RateFunction,
    ShiftTarget,
    family_tau,
    restrict_rate,
    tau_exponents,
)
from .symbolic import (
    ShiftOfFiniteType,
    SoficPresentation,
    SymbolicError,
    digraph_period,
    index_set,
    indices_intersect,
    mixing_gap,
    period_decomposition,
    sft_entropy,
    sofic_entropy,
)
from .systems import (
    IntegerMatrixSystem,
    SpectrumError,
    analyze_matrix,
    crude_profile_from_matrix,
    entropy_toral,
    sharp_profile_from_matrix,
)

SCHEMA_VERSION = 1
ENV_OUT = "SHRINKTARGET_OUT"

TaskError = (
    ConfigError,
    HypothesisViolatedError,
    OracleError,
    RateError,
    SpectrumError,
    SymbolicError,
    ValueError,
)


# ---------------------------------------------------------------------------
# Deterministic number formatting
# ---------------------------------------------------------------------------


def fmt(x: float | None) -> str | None:
    """Real values become 12-significant-digit decimal strings; None stays."""
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".12g")


def _report_row(rule: str, rep: BoundReport, **extra: Any) -> dict:
    row = {
        "rule": rule,
        "case": rep.case_tag.value,
        "h_lower": fmt(rep.entropy_lower),
        "h_upper": fmt(rep.entropy_upper),
        "dim_lower": fmt(rep.dim_lower),
        "dim_upper": fmt(rep.dim_upper),
        "assumptions": [[name, ok] for name, ok in rep.assumptions],
        "notes": list(rep.notes),
    }
    row.update(extra)
    return row


# ---------------------------------------------------------------------------
# Rate plumbing shared by executors
# ---------------------------------------------------------------------------


def effective_exponents(triple: RateTriple) -> RateExponents:
    """Per-triple exponents, each side taken from the set it is valid for.

    Lower bounds consult the rate only at times in S, so tau_upper comes from
    the rate restricted to S (equal to phi on S, 1 off S) - never larger than
    the plain tau_upper.  Upper bounds come from embedding the hit set into
    the every-time hit set of phi itself, so tau_lower is the rate's own
    liminf exponent.  The two stay ordered: liminf over all n is at most the
    limsup over the subsequence S.
    """
    if isinstance(triple.phi, RateExponents):
        return triple.phi
    own = tau_exponents(triple.phi)
    restricted = tau_exponents(restrict_rate(triple.phi, triple.time_set))
    return RateExponents(restricted.tau_upper, own.tau_lower)


def family_exponents(config: ExperimentConfig) -> RateExponents:
    return family_tau([effective_exponents(t) for t in config.rates])


def _all_naturals(config: ExperimentConfig) -> bool:
    return all(isinstance(t.time_set, AllTimes) for t in config.rates)


def _index_data(config: ExperimentConfig, shift: ShiftOfFiniteType):
    """Index sets per rate triple and their common difference (or None)."""
    decomp = period_decomposition(shift)
    if decomp.period == 1:
        return decomp, None, None
    sets = []
    for triple in config.rates:
        assert isinstance(triple.target, ShiftTarget)
        sets.append(index_set(triple.target, triple.time_set, decomp))
    return decomp, sets, indices_intersect(sets)


# ---------------------------------------------------------------------------
# Task executors
# ---------------------------------------------------------------------------


def _run_analyze(config: ExperimentConfig) -> dict:
    if config.system_kind == "matrix":
        m = config.system
        assert isinstance(m, IntegerMatrixSystem)
        p = analyze_matrix(m)
        out: dict[str, Any] = {
            "dim": p.dim,
            "determinant": m.det,
            "kind": m.kind,
            "clusters": [
                {"modulus": fmt(c.modulus), "multiplicity": c.multiplicity, "has_nonreal": c.has_nonreal}
                for c in p.clusters
            ],
            "d_s": p.d_s,
            "d_u": p.d_u,
            "is_hyperbolic": p.is_hyperbolic,
            "is_expanding": p.is_expanding,
            "lambda_s_mod": fmt(p.lambda_s_mod),
            "lambda_u_mod": fmt(p.lambda_u_mod),
        }
        if p.has_complex_pair:
            out["notes"] = ["a modulus cluster contains complex eigenvalue pairs"]
        if p.is_hyperbolic or p.is_expanding:
            out["h_top"] = fmt(entropy_toral(p))
            crude = crude_profile_from_matrix(m)
            out["crude_profile"] = _profile_dict(crude)
            try:
                out["sharp_profile"] = _profile_dict(sharp_profile_from_matrix(m, p))
            except SpectrumError as exc:
                out["sharp_profile"] = None
                out.setdefault("notes", []).append(f"no sharp profile: {exc}")
        return out
    if config.system_kind == "sft":
        shift = config.system
        assert isinstance(shift, ShiftOfFiniteType)
        decomp = period_decomposition(shift)
        out = {
            "alphabet_size": shift.alphabet_size,
            "sided": shift.sided,
            "h_top": fmt(sft_entropy(shift)),
            "period": decomp.period,
            "classes": list(decomp.class_of),
        }
        if decomp.period == 1:
            out["mixing_gap"] = mixing_gap(shift)
        return out
    if config.system_kind == "sofic":
        pres = config.system
        assert isinstance(pres, SoficPresentation)
        decomp = digraph_period(pres.adjacency())
        return {
            "states": pres.states,
            "labels": list(pres.labels),
            "sided": pres.sided,
            "h_top": fmt(sofic_entropy(pres)),
            "period": decomp.period,
        }
    raise ConfigError("$.tasks", "analyze needs a matrix or symbolic system")


def _profile_dict(prof) -> dict:
    return {
        "lambda1": fmt(prof.lambda1),
        "lambda2": fmt(prof.lambda2),
        "ln_l1": fmt(prof.ln_l1),
        "ln_l2": fmt(prof.ln_l2),
        "h_top": fmt(prof.h_top),
    }


def _run_bounds(config: ExperimentConfig) -> dict:
    tau = family_exponents(config)
    naturals = _all_naturals(config)
    rows: list[dict] = []

    if config.system_kind == "matrix":
        m = config.system
        p = analyze_matrix(m)
        if not p.is_hyperbolic:
            raise SpectrumError("spectrum has a modulus at 1; no bounds apply")
        for label, profile in _matrix_profiles(m, p):
            inp = bound_input_from_profile(profile, tau)
            if p.is_expanding:
                rep = bounds_expanding(inp, tau_lower_substitution=naturals)
            else:
                rep = bounds_hyperbolic_set(inp, tau_lower_substitution=naturals)
            rows.append(_report_row(f"{label}_sandwich", rep))
        for i, triple in enumerate(config.rates):
            crude = crude_profile_from_matrix(m)
            phi = triple.phi
            rep = covering_bounds(crude, phi if isinstance(phi, RateExponents) else tau_exponents(phi))
            rows.append(_report_row("covering_lower", rep, rate_index=i))
    elif config.system_kind in ("sft", "sofic"):
        rows.extend(_shift_bound_rows(config, tau, naturals))
    elif config.system_kind == "profile":
        prof = config.system
        rep = _general_profile_bounds(prof, tau)
        rows.append(_report_row("general_profile_sandwich", rep))
        rows.append(_report_row("covering_lower", covering_bounds(prof, tau)))
    return {"tau_upper": fmt(tau.tau_upper), "tau_lower": fmt(tau.tau_lower), "rows": rows}


def _matrix_profiles(m: IntegerMatrixSystem, p):
    profiles = [("crude", crude_profile_from_matrix(m))]
    try:
        profiles.append(("sharp", sharp_profile_from_matrix(m, p)))
    except SpectrumError:
        pass
    return profiles


def _shift_bound_rows(config: ExperimentConfig, tau: RateExponents, naturals: bool) -> list[dict]:
    rows: list[dict] = []
    if config.system_kind == "sft":
        shift = config.system
        assert isinstance(shift, ShiftOfFiniteType)
        decomp, sets, common = _index_data(config, shift)
        h = sft_entropy(shift)
        sided = shift.sided
        shift_for_bounds = shift
    else:
        pres = config.system
        assert isinstance(pres, SoficPresentation)
        decomp = digraph_period(pres.adjacency())
        sets, common = None, None
        h = sofic_entropy(pres)
        sided = pres.sided
        # bounds dispatch needs only mixing/entropy data; reuse a full shift
        # carcass of the right sidedness with the sofic entropy plugged in
        shift_for_bounds = None

    index_ok: bool | None = None
    if decomp.period > 1:
        index_ok = None if sets is None else (common is not None)

    if shift_for_bounds is not None:
        fn = bounds_one_sided_shift if sided == "one" else bounds_two_sided_shift
        rep = fn(
            shift_for_bounds,
            tau,
            time_sets_all_naturals=naturals,
            index_ok=index_ok,
        )
    else:
        rep = _sofic_bound_report(decomp.period, h, sided, tau, naturals, index_ok)
    extra: dict[str, Any] = {"h_top": fmt(h), "period": decomp.period}
    if sets is not None:
        extra["index_sets"] = [sorted(list(pair) for pair in s.pairs) for s in sets]
        extra["common_difference"] = common
    rows.append(_report_row(f"{sided}_sided_shift", rep, **extra))
    return rows


def _sofic_bound_report(
    period: int, h: float, sided: str, tau: RateExponents, naturals: bool, index_ok
) -> BoundReport:
    """Shift-theorem dispatch from (period, entropy) alone, for sofic systems."""
    from .symbolic import full_shift

    carcass = full_shift(2, sided)
    fn = bounds_one_sided_shift if sided == "one" else bounds_two_sided_shift
    if period == 1:
        return fn(carcass, tau, time_sets_all_naturals=naturals, index_ok=None, h_top=h)
    return fn(
        carcass, tau, time_sets_all_naturals=False,
        index_ok=index_ok if index_ok is not None else False, h_top=h,
    )


def _general_profile_bounds(prof, tau: RateExponents) -> BoundReport:
    """Compose the generic lower and upper bounds for an abstract profile."""
    inp = bound_input_from_profile(prof, tau)
    up = upper_bounds(inp)
    assumptions = list(up.assumptions)
    try:
        h_low = lower_entropy_general(inp)
        if prof.ln_l1 is not None:
            dim_low = lower_dim_bilipschitz(inp)
        else:
            dim_low = lower_dim_lipschitz(inp)
        assumptions.append(("lower hypothesis tau_upper < lambda1", True))
    except HypothesisViolatedError:
        h_low = dim_low = None
        assumptions.append(("lower hypothesis tau_upper < lambda1", False))
    if up.entropy_upper is not None and h_low is not None and h_low > up.entropy_upper:
        # zero-entropy upper cases beat the positive lower hypothesis region
        h_low = dim_low = None
        assumptions.append(("lower/upper regime conflict", False))
    return BoundReport(
        entropy_lower=h_low,
        entropy_upper=up.entropy_upper,
        dim_lower=dim_low,
        dim_upper=up.dim_upper,
        case_tag=up.case_tag,
        assumptions=tuple(assumptions),
        notes=up.notes,
    )


def _run_exact(config: ExperimentConfig) -> dict:
    m = config.system
    assert isinstance(m, IntegerMatrixSystem)
    tau = family_exponents(config)
    naturals = _all_naturals(config)
    p = analyze_matrix(m)
    rows: list[dict] = []
    if not naturals:
        rows.append(
            {
                "rule": "exact_values",
                "case": None,
                "h_lower": None, "h_upper": None, "dim_lower": None, "dim_upper": None,
                "assumptions": [["time sets all naturals", False]],
                "notes": ["exact values are stated for time sets equal to all of N"],
            }
        )
        return {"tau_lower": fmt(tau.tau_lower), "rows": rows}
    if p.is_expanding:
        rep = exact_expanding_torus(p, tau)
        rows.append(_report_row("expanding_torus_exact", rep))
    elif p.lambda_s_mod is not None and p.abs_det == 1:
        rep = exact_toral_automorphism(p, tau)
        rows.append(_report_row("toral_automorphism_exact", rep))
    else:
        raise HypothesisViolatedError(
            "no exact theorem applies to this spectrum; "
            "run the 'bounds' task for sandwich estimates"
        )
    return {"tau_lower": fmt(tau.tau_lower), "rows": rows}


def _require_constant_symbol_target(triple: RateTriple, i: int):
    tgt = triple.target
    if not isinstance(tgt, ShiftTarget) or tgt.preperiod or tgt.schedule_period != 1:
        raise ConfigError(
            f"$.rates[{i}].target", "oracle schemes need a constant symbol target"
        )
    return tgt.target(0)


def _run_oracle(config: ExperimentConfig) -> dict:
    shift = config.system
    assert isinstance(shift, ShiftOfFiniteType)
    params = config.oracle_params
    h = sft_entropy(shift)
    rows = []
    for i, triple in enumerate(config.rates):
        if not isinstance(triple.phi, Exponential):
            raise ConfigError(
                f"$.rates[{i}].phi", "oracle schemes need a pure exponential rate"
            )
        z = _require_constant_symbol_target(triple, i)
        tau = triple.phi.tau
        scheme = LimsupCylinderScheme(shift, tau, z)
        lo = params.grid_min if params.grid_min is not None else params.grid_step
        hi = params.grid_max if params.grid_max is not None else h + 0.1
        n_pts = int(round((hi - lo) / params.grid_step))
        grid = [lo + k * params.grid_step for k in range(n_pts + 1)]
        bracket = bracket_critical_exponent(scheme, grid, params.depth)
        moran = moran_dimension(shift, tau, params.stages)
        rows.append(
            {
                "rate_index": i,
                "tau": fmt(tau),
                "bracket_lo": fmt(bracket[0]),
                "bracket_hi": fmt(bracket[1]),
                "moran_estimate": fmt(moran),
                "shift_exact_value": fmt(h / (1.0 + tau)),
                "depth": params.depth,
                "stages": params.stages,
            }
        )
    return {"h_top": fmt(h), "rows": rows}


def _run_witness(config: ExperimentConfig) -> dict:
    shift = config.system
    assert isinstance(shift, ShiftOfFiniteType)
    params = config.oracle_params
    rows = []
    for i, triple in enumerate(config.rates):
        if not isinstance(triple.phi, RateFunction):
            raise ConfigError(
                f"$.rates[{i}].phi", "witness construction needs a rate function"
            )
        if not isinstance(triple.target, ShiftTarget):
            raise ConfigError(f"$.rates[{i}].target", "symbolic target required")
        plan = plan_witness(
            shift, triple.phi, triple.target, triple.time_set, params.stages, params.eta
        )
        cert = construct_witness(plan, shift, triple.target)
        confirmed = verify_witness(cert.prefix, triple.phi, triple.target, triple.time_set)
        planned = [b.hit_time for b in plan.blocks]
        rows.append(
            {
                "rate_index": i,
                "planned_hits": planned,
                "prefix": "".join(str(c) for c in cert.prefix),
                "hits": [
                    [hh.time, hh.achieved_exponent, hh.required_exponent]
                    for hh in cert.hits
                ],
                "all_verified": cert.all_verified,
                "independently_confirmed": [n for n in confirmed if n in planned],
            }
        )
    return {"rows": rows}


def _run_sweep(config: ExperimentConfig) -> dict:
    if config.sweep_taus is None:
        raise ConfigError("$.sweep", "sweep requires a sweep.taus grid")
    rows = []
    for t in config.sweep_taus:
        tau = RateExponents(t, t)
        rep = _sweep_report(config, tau)
        rows.append(
            {
                "tau": fmt(t),
                "h_lower": fmt(rep.entropy_lower),
                "h_upper": fmt(rep.entropy_upper),
                "dim_lower": fmt(rep.dim_lower),
                "dim_upper": fmt(rep.dim_upper),
                "case_tag": rep.case_tag.value,
            }
        )
    return {"rows": rows}


def _sweep_report(config: ExperimentConfig, tau: RateExponents) -> BoundReport:
    kind = config.system_kind
    if kind == "matrix":
        m = config.system
        p = analyze_matrix(m)
        if p.is_expanding:
            return exact_expanding_torus(p, tau)
        if p.lambda_s_mod is not None and p.abs_det == 1:
            return exact_toral_automorphism(p, tau)
        if p.is_hyperbolic:
            return bounds_hyperbolic_set(
                bound_input_from_profile(crude_profile_from_matrix(m), tau)
            )
        raise SpectrumError("spectrum has a modulus at 1; no bounds apply")
    if kind == "sft":
        shift = config.system
        fn = bounds_one_sided_shift if shift.sided == "one" else bounds_two_sided_shift
        return fn(shift, tau)
    if kind == "sofic":
        pres = config.system
        decomp = digraph_period(pres.adjacency())
        return _sofic_bound_report(
            decomp.period, sofic_entropy(pres), pres.sided, tau, True, None
        )
    return _general_profile_bounds(config.system, tau)


_EXECUTORS = {
    "analyze": _run_analyze,
    "bounds": _run_bounds,
    "exact": _run_exact,
    "oracle": _run_oracle,
    "witness": _run_witness,
    "sweep": _run_sweep,
}


# ---------------------------------------------------------------------------
# Report assembly and emission
# ---------------------------------------------------------------------------


def run(config: ExperimentConfig, tasks: tuple[str, ...] | None = None, seedless: bool = False):
    """Execute tasks and assemble the report; returns (report, all_ok, timings)."""
    todo = tasks if tasks is not None else config.tasks
    results = []
    timings = []
    all_ok = True
    for task in todo:
        started = time.perf_counter()
        try:
            payload = _EXECUTORS[task](config)
            results.append({"task": task, "status": "ok", **payload})
        except TaskError as exc:
            all_ok = False
            results.append({"task": task, "status": "error", "error": str(exc)})
        timings.append((task, time.perf_counter() - started))
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "shrinktarget", "version": __version__},
        "seedless": seedless,
        "config": config.raw,
        "results": results,
    }
    return report, all_ok, timings


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


_SWEEP_COLUMNS = ("tau", "h_lower", "h_upper", "dim_lower", "dim_upper", "case_tag")
_BOUNDS_COLUMNS = ("rule", "case", "h_lower", "h_upper", "dim_lower", "dim_upper")


def render_csv(rows: list[dict], columns: tuple[str, ...]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else row.get(c) for c in columns])
    return buf.getvalue()


def write_report(report: dict, out_dir: Path, formats: tuple[str, ...]) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        path = out_dir / "report.json"
        path.write_bytes(render_json(report).encode())
        written.append(path)
    if "csv" in formats:
        for res in report["results"]:
            if res.get("status") != "ok":
                continue
            if res["task"] == "sweep":
                path = out_dir / "sweep.csv"
                path.write_bytes(render_csv(res["rows"], _SWEEP_COLUMNS).encode())
                written.append(path)
            elif res["task"] == "bounds":
                path = out_dir / "bounds.csv"
                path.write_bytes(render_csv(res["rows"], _BOUNDS_COLUMNS).encode())
                written.append(path)
    return written


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shrinktarget",
        description="entropy and dimension bounds for shrinking target sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, helptext in (
        ("analyze", "spectral / symbolic structure of the system"),
        ("bounds", "sandwich bounds for the configured rates"),
        ("exact", "exact-value theorems (matrix systems, S = N)"),
        ("oracle", "covering-sum brackets and Moran estimates"),
        ("witness", "explicit witness-point construction"),
        ("sweep", "bound rows over a tau grid"),
    ):
        p = sub.add_parser(cmd, help=helptext)
        p.add_argument("--config", required=True, help="path to the JSON config")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument(
            "--format", choices=("json", "csv", "both"), default=None,
            help="report formats (overrides config)",
        )
        p.add_argument(
            "--seedless", action="store_true",
            help="assert that no randomness is used (recorded in the report)",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out or os.environ.get(ENV_OUT) or config.output_dir)
    formats = config.formats
    if args.format == "both":
        formats = ("json", "csv")
    elif args.format is not None:
        formats = (args.format,)

    if args.command == "sweep" and config.sweep_taus is None:
        print("config error: $.sweep: sweep requires a sweep.taus grid", file=sys.stderr)
        return 2

    report, all_ok, timings = run(config, tasks=(args.command,), seedless=args.seedless)
    try:
        written = write_report(report, out_dir, formats)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    for task, seconds in timings:
        print(f"[{task}] {seconds:.3f}s", file=sys.stderr)
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
