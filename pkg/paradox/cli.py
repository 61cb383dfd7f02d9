"""Command line: ``python cli.py <command> [flags]``.

Settings come from three layers: built-in defaults, an optional
``--config FILE`` of ``key=value`` lines, then the flags themselves.
Exit codes: 0 ok, 2 usage, 3 numerical non-convergence, 4 domain error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from .errors import DomainError, ParadoxError, UsageError
from .reporting import render, render_error, run_command
from .schemas import RunConfig

logger = logging.getLogger(__name__)

COMMANDS = ("table1", "figure1", "analyze", "zone", "simulate", "calibrate")


def _count(text: str) -> int:
    """Integer that may be written as 1e6."""
    value = float(text)
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def _float_list(text: str) -> List[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _flag(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


# flag name -> (RunConfig field, converter, help)
FLAGS: Dict[str, tuple] = {
    "alpha": ("alpha", float, "significance level"),
    "alphas": ("alphas", _float_list, "comma-separated significance levels (table1)"),
    "n": ("n", _count, "sample size"),
    "z": ("z", float, "standardized statistic (xbar - theta0) sqrt(n) / sigma"),
    "xbar": ("xbar", float, "sample mean"),
    "sigma": ("sigma", float, "known sampling sd"),
    "theta0": ("theta0", float, "null value"),
    "c": ("c", float, "prior mass on the null"),
    "tau": ("tau", float, "conjugate slab scale sigma0/sigma"),
    "interval-width": ("interval_width", float, "uniform slab width I"),
    "delta": ("delta", float, "equivalence half-width"),
    "outer-bound": ("outer_bound", float, "truncation of the H1 region"),
    "threshold": ("threshold", float, "posterior threshold (zone, simulate)"),
    "truth": ("truth", str, "null-true or mixture (simulate)"),
    "seed": ("seed", _count, "random seed"),
    "reps": ("reps", _count, "Monte Carlo replicates"),
    "workers": ("workers", _count, "simulation threads"),
    "panel": ("panel", str, "Figure 1 panel, A or B"),
    "grid": ("grid", str, "log-spaced range START:STOP:COUNT"),
    "mode": ("mode", str, "literal or odds-cancellation (calibrate)"),
    "constant": ("constant", float, "k (literal) or q (odds-cancellation)"),
    "format": ("output_format", str, "csv or json"),
    "out": ("output_path", str, "output file (default standard output)"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cli.py", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="key=value settings file")
    for name, (dest, convert, help_text) in FLAGS.items():
        parser.add_argument(f"--{name}", dest=dest, type=convert, default=argparse.SUPPRESS, help=help_text)
    parser.add_argument(
        "--quote-z", dest="quote_z", action="store_true", default=argparse.SUPPRESS,
        help="use the rounded z = 1.96 for alpha = 0.05 instead of the exact quantile",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging on standard error")
    return parser


def read_config_file(path: Path) -> Dict[str, object]:
    converters: Dict[str, tuple] = {**FLAGS, "quote-z": ("quote_z", _flag, "")}
    values: Dict[str, object] = {}
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, text = line.partition("=")
        key = key.strip()
        if not sep or key not in converters:
            raise UsageError(f"{path}:{number}: expected a known key=value, got {raw.strip()!r}")
        dest, convert, _ = converters[key]
        try:
            values[dest] = convert(text.strip())
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"{path}:{number}: bad value for {key}: {exc}") from exc
    return values


def build_config(argv: Optional[Sequence[str]] = None) -> tuple:
    args = vars(build_parser().parse_args(argv))
    verbose = args.pop("verbose")
    config_path = args.pop("config", None)
    merged = read_config_file(config_path) if config_path is not None else {}
    merged.update(args)
    try:
        return RunConfig(**merged), verbose
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise UsageError(f"invalid value for {where}: {first['msg']}") from exc


def _write(text: str, output_path: Optional[str]) -> None:
    if output_path:
        Path(output_path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        run, verbose = build_config(argv)
    except UsageError as exc:
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
        logger.error("%s", exc.message)
        return exc.exit_code

    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        report = run_command(run)
    except ValidationError as exc:
        error = DomainError(f"invalid input: {exc.errors()[0]['msg']}")
        logger.error("%s failed: %s", run.command, error.message)
        if run.output_format == "json":
            _write(render_error(error, run.command), run.output_path)
        return error.exit_code
    except ParadoxError as exc:
        logger.error("%s failed: %s", run.command, exc.message)
        if run.output_format == "json":
            _write(render_error(exc, run.command), run.output_path)
        return exc.exit_code
    _write(render(report, run.output_format), run.output_path)
    return 0
