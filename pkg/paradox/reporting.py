"""Report rows for each command and their CSV / JSON rendering.

Rendering is deterministic: numbers go through one formatter (six
significant digits in fixed notation, integers undecorated), column order
is fixed per command and nothing time- or host-dependent is emitted.
"""

import io
import json
import logging
import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from . import config
from .errors import DomainError, ParadoxError, UsageError
from .interval_null import agreement_report
from .paradox_analysis import (
    bartlett_curve,
    conflict_zone,
    lindley_curve,
    min_n_strong_contrast,
    simulate_conflict_rate,
    zone_probability,
)
from .point_null import calibrated_posterior_odds, calibration_limit, critical_z, resolve_scenario
from .schemas import (
    CalibrationSpec,
    ConjugateSlab,
    CurveSeries,
    IntervalNullSpec,
    PriorSpec,
    RunConfig,
    StrongContrastQuery,
    UniformSlab,
)

logger = logging.getLogger(__name__)


class Report(BaseModel):
    command: str
    inputs: Dict[str, Any] = {}
    columns: List[str]
    rows: List[Dict[str, Any]]
    # nested form of a one-row report, used by JSON output
    result: Optional[Dict[str, Any]] = None
    metadata: Dict[str, Any] = {}


# ----------------------------
# formatting
# ----------------------------
def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        if value == 0.0:
            return "0"
        if 1e-12 <= abs(value) < 1e16:
            return np.format_float_positional(
                value, precision=config.SIGNIFICANT_DIGITS, unique=False, fractional=False, trim="-"
            )
        return f"{value:.{config.SIGNIFICANT_DIGITS - 1}e}"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{config.SIGNIFICANT_DIGITS}g}")
    return str(value)


def render_csv(report: Report) -> str:
    frame = pd.DataFrame(
        [[format_value(row.get(col)) for col in report.columns] for row in report.rows],
        columns=report.columns,
    )
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def render_json(report: Report) -> str:
    payload: Dict[str, Any] = {"command": report.command, "inputs": report.inputs}
    if report.result is not None:
        payload["result"] = report.result
    else:
        payload["rows"] = report.rows
    payload["metadata"] = report.metadata
    return json.dumps(_jsonable(payload), indent=2, allow_nan=False) + "\n"


def render(report: Report, output_format: str) -> str:
    return render_json(report) if output_format == "json" else render_csv(report)


def render_error(error: ParadoxError, command: Optional[str]) -> str:
    return json.dumps(_jsonable({"command": command, "error": error.to_dict()}), indent=2) + "\n"


# ----------------------------
# helpers
# ----------------------------
def parse_range(spec: str) -> np.ndarray:
    """``START:STOP:COUNT`` -> COUNT log-spaced values from START to STOP inclusive."""
    try:
        start_text, stop_text, count_text = spec.split(":")
        start, stop, count = float(start_text), float(stop_text), int(count_text)
    except ValueError as exc:
        raise UsageError(f"malformed range {spec!r}; expected START:STOP:COUNT") from exc
    if count < 1 or not 0.0 < start or (count > 1 and not start < stop):
        raise UsageError(f"range {spec!r} needs 0 < START < STOP and COUNT >= 1")
    if count == 1:
        return np.array([start])
    return np.logspace(math.log10(start), math.log10(stop), count)


def _require(run: RunConfig, *fields: str) -> None:
    for field in fields:
        if getattr(run, field) is None:
            flag = "--" + field.replace("_", "-")
            raise UsageError(f"command {run.command} needs {flag}")


def _series_rows(series: CurveSeries) -> List[Dict[str, Any]]:
    return [
        {series.axis_label: p.abscissa, "posterior_h0": p.posterior_h0, "p_value": p.p_value}
        for p in series.points
    ]


def _domain(exc: ValidationError, what: str) -> DomainError:
    return DomainError(f"invalid {what}: {exc.errors()[0]['msg']}")


# ----------------------------
# commands
# ----------------------------
def cmd_table1(
    alphas: Sequence[float] = config.TABLE1_ALPHAS,
    c: float = config.DEFAULT_C,
    tau: float = config.DEFAULT_TAU,
    sigma: float = config.DEFAULT_SIGMA,
    quote_z: bool = False,
) -> Report:
    """Minimum n for strong contrast, one row per alpha, both prior setups."""
    if not alphas:
        raise UsageError("table1 needs at least one alpha")
    rows = []
    for alpha in alphas:
        row: Dict[str, Any] = {"alpha": alpha, "posterior_target": 1.0 - alpha}
        errors = []
        for column, setup in (("lindley_min_n", "lindley-uniform"), ("conjugate_min_n", "normal-conjugate")):
            try:
                query = StrongContrastQuery(alpha=alpha, setup=setup, c=c, tau=tau, sigma=sigma, quote_z=quote_z)
                row[column] = min_n_strong_contrast(query)
            except ValidationError as exc:
                row[column] = None
                errors.append(f"{setup}: {exc.errors()[0]['msg']}")
            except ParadoxError as exc:
                row[column] = None
                errors.append(f"{setup}: {exc.message}")
        if errors:
            logger.warning("table1 alpha=%g: %s", alpha, "; ".join(errors))
        row["error"] = "; ".join(errors)
        rows.append(row)
    return Report(
        command="table1",
        inputs={"alphas": list(alphas), "c": c, "tau": tau, "sigma": sigma, "quote_z": quote_z},
        columns=["alpha", "posterior_target", "lindley_min_n", "conjugate_min_n", "error"],
        rows=rows,
        metadata={"integer_rule": "smallest n with P(H0 | just-significant mean) >= 1 - alpha"},
    )


def cmd_figure1(
    panel: str = "A", grid: Optional[str] = None, c: float = config.DEFAULT_C, quote_z: bool = False
) -> Report:
    """Panel A: posterior against n at fixed z. Panel B: posterior against tau at fixed data."""
    if panel == "A":
        z = critical_z(config.PANEL_A_ALPHA, quote_z)
        sizes = parse_range(grid or config.PANEL_A_GRID)
        if round(sizes[0]) < 1:
            raise UsageError(f"panel A range {grid!r} must start at a sample size of at least 1")
        n_grid = sorted({int(round(n)) for n in sizes})
        series = lindley_curve(z, config.PANEL_A_TAU, c, n_grid)
        inputs = {"panel": "A", "z": z, "tau": config.PANEL_A_TAU, "c": c}
    elif panel == "B":
        z = config.PANEL_B_Z
        series = bartlett_curve(z, config.PANEL_B_N, c, list(parse_range(grid or config.PANEL_B_GRID)))
        inputs = {"panel": "B", "z": z, "n": config.PANEL_B_N, "c": c}
    else:
        raise UsageError(f"unknown panel {panel!r}; expected A or B")
    inputs["grid"] = grid or (config.PANEL_A_GRID if panel == "A" else config.PANEL_B_GRID)
    return Report(
        command="figure1",
        inputs=inputs,
        columns=[series.axis_label, "posterior_h0", "p_value"],
        rows=_series_rows(series),
        metadata={"prior": "normal conjugate slab, sd tau * sigma"},
    )


def _analysis_scenario(run: RunConfig):
    alpha = run.alpha if run.alpha is not None else config.DEFAULT_ALPHA
    # alpha is the test level; it fixes z only when neither z nor xbar is given
    z_from_alpha = alpha if run.z is None and run.xbar is None else None
    scenario = resolve_scenario(
        theta0=run.theta0, sigma=run.sigma, n=run.n, z=run.z, alpha=z_from_alpha, xbar=run.xbar, quote_z=run.quote_z
    )
    return scenario, alpha


def cmd_analyze(run: RunConfig) -> Report:
    """Point-null and interval-null verdicts side by side for one scenario."""
    _require(run, "n", "delta")
    scenario, alpha = _analysis_scenario(run)
    try:
        slab = UniformSlab(width=run.interval_width) if run.interval_width is not None else ConjugateSlab(
            tau=run.tau if run.tau is not None else config.DEFAULT_TAU
        )
        prior = PriorSpec(mass_on_null=run.c, slab=slab)
        spec = IntervalNullSpec.with_defaults(run.delta, scenario.sigma, run.outer_bound)
    except ValidationError as exc:
        raise _domain(exc, "prior or interval specification") from exc

    verdict = agreement_report(scenario, prior, spec, alpha)
    result = {
        "scenario": {**scenario.model_dump(), "xbar": scenario.xbar},
        "prior": prior.model_dump(),
        "interval": spec.model_dump(),
        "alpha": alpha,
        "classification": verdict.model_dump(),
    }
    row = {
        "theta0": scenario.theta0, "sigma": scenario.sigma, "n": scenario.n, "z": scenario.z, "xbar": scenario.xbar,
        "c": prior.mass_on_null, "slab": prior.slab.kind,
        "slab_scale": getattr(prior.slab, "width", None) or getattr(prior.slab, "tau", None),
        "delta": spec.delta, "outer_bound": spec.outer_bound, "alpha": alpha,
    }
    for key, value in verdict.model_dump().items():
        if key == "tost":
            row.update({f"tost_{k}": v for k, v in value.items() if k != "alpha"})
        else:
            row[key] = value
    return Report(
        command="analyze",
        inputs=run.inputs(),
        columns=list(row),
        rows=[row],
        result=result,
        metadata={"tost": "known-sigma z form", "interval_h1": "truncated at theta0 +- outer_bound"},
    )


def cmd_zone(run: RunConfig) -> Report:
    _require(run, "n")
    alpha = run.alpha if run.alpha is not None else config.DEFAULT_ALPHA
    tau = run.tau if run.tau is not None else config.DEFAULT_TAU
    zone = conflict_zone(run.n, alpha, tau, run.c, run.threshold)
    row = {
        "n": run.n, "alpha": alpha, "tau": tau, "c": run.c, "threshold": run.threshold,
        "z_lo": zone.z_lo, "z_hi": zone.z_hi, "empty": zone.empty, "null_probability": zone_probability(zone),
    }
    return Report(command="zone", inputs=run.inputs(), columns=list(row), rows=[row])


def cmd_simulate(run: RunConfig) -> Report:
    _require(run, "n")
    alpha = run.alpha if run.alpha is not None else config.DEFAULT_ALPHA
    tau = run.tau if run.tau is not None else config.DEFAULT_TAU
    result = simulate_conflict_rate(
        run.n, alpha, tau, run.c, run.truth, run.reps, run.seed, workers=run.workers, threshold=run.threshold
    )
    reference = zone_probability(conflict_zone(run.n, alpha, tau, run.c, run.threshold))
    row = {
        "truth": result.truth, "n": run.n, "alpha": alpha, "tau": tau, "c": run.c, "threshold": run.threshold,
        "reps": result.reps, "seed": result.seed, "conflicts": result.conflicts, "rate": result.rate,
        "standard_error": result.standard_error, "null_zone_probability": reference,
    }
    return Report(command="simulate", inputs=run.inputs(), columns=list(row), rows=[row], metadata=result.metadata)


def cmd_calibrate(run: RunConfig) -> Report:
    """Posterior odds when the prior odds scale with the slab width, over a sigma0/sigma grid."""
    _require(run, "n")
    scenario, _ = _analysis_scenario(run)
    spec = CalibrationSpec(mode=run.mode, constant=run.constant)
    limit = calibration_limit(scenario.z, scenario.n, spec.constant) if spec.mode == "odds-cancellation" else None
    rows = []
    for ratio in parse_range(run.grid or config.CALIBRATION_GRID):
        row: Dict[str, Any] = {"mode": spec.mode, "constant": spec.constant, "sigma0_over_sigma": ratio}
        try:
            odds = calibrated_posterior_odds(scenario.z, scenario.n, ratio, spec)
            posterior = 1.0 if math.isinf(odds) else odds / (1.0 + odds)
            row.update(posterior_odds=odds, posterior_h0=posterior, error="")
        except DomainError as exc:
            row.update(posterior_odds=None, posterior_h0=None, error=exc.message)
        row["limit"] = limit
        rows.append(row)
    return Report(
        command="calibrate",
        inputs=run.inputs(),
        columns=["mode", "constant", "sigma0_over_sigma", "posterior_odds", "posterior_h0", "error", "limit"],
        rows=rows,
        metadata={
            "literal": "rho0 = 1 - k * sigma0/sigma, defined below sigma0/sigma = 1/k",
            "odds-cancellation": "prior odds q / (sigma0/sigma); limit q * sqrt(n) * exp(-z^2/2)",
        },
    )


def run_command(run: RunConfig) -> Report:
    if run.command == "table1":
        return cmd_table1(
            run.alphas if run.alphas is not None else config.TABLE1_ALPHAS,
            c=run.c,
            tau=run.tau if run.tau is not None else config.DEFAULT_TAU,
            sigma=run.sigma,
            quote_z=run.quote_z,
        )
    if run.command == "figure1":
        return cmd_figure1(run.panel, run.grid, c=run.c, quote_z=run.quote_z)
    if run.command == "analyze":
        return cmd_analyze(run)
    if run.command == "zone":
        return cmd_zone(run)
    if run.command == "simulate":
        return cmd_simulate(run)
    return cmd_calibrate(run)
