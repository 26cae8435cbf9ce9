"""Batch command-line surface of p3fox.

Subcommands: eval, asym, expand, trace, grid, verify. Records are written as
JSON, arrays as CSV with a header row. Exit codes are 0 ok, 1 verify
failures, 2 usage, 3 domain errors and 4 numerical failures.
"""

import argparse
import asyncio
import csv
import io
import json
import logging
import sys
from collections.abc import Iterable, Sequence
from typing import Any, NoReturn

from aiofiles import open as aopen
from pydantic import ValidationError

from p3fox.api.asymptotics import (
    delta_leading,
    delta_leading_value,
    leading_power_scan,
    u_leading,
    u_regime,
)
from p3fox.api.expansion import expand_u
from p3fox.api.hankel import delta
from p3fox.api.ode import SEED_X, SWITCH_OUT, chart_switch, grid, seed_state, trace
from p3fox.api.painleve import u_n_backlund, u_n_determinant, u_n_recurrence
from p3fox.api.verify import run_suite
from p3fox.models.config import AlphaScan, RunConfig
from p3fox.models.params import SolutionParams
from p3fox.models.regime import complex_to_json
from p3fox.models.trajectory import ChartState, GridSpec
from p3fox.utilities.common import parse_complex, parse_real
from p3fox.utilities.errors import DomainError, NumericalError, P3Error, UsageError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4

_NEEDS_ALPHA = ("eval", "expand", "trace", "grid")
_EXPAND_COLUMNS = ("m", "l", "exp_re", "exp_im", "coef_re", "coef_im")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser raising UsageError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="p3fox",
        description="Bessel solutions of Painleve III: evaluation, asymptotics, "
        "series and continuation.",
    )
    parser.add_argument(
        "subcommand", choices=["eval", "asym", "expand", "trace", "grid", "verify"]
    )
    parser.add_argument("--n", type=int, default=0, help="Index n >= 0 (default: 0).")
    parser.add_argument("--alpha", type=str, help='Alpha, "a+bi" or "p/q".')
    parser.add_argument("--d1", type=str, default="1", help="Coefficient of J (default: 1).")
    parser.add_argument("--d2", type=str, default="0", help="Coefficient of Y (default: 0).")
    parser.add_argument("--x", type=str, help="Evaluation point.")
    parser.add_argument("--x0", type=str, help="Start of a trace, default the series seed.")
    parser.add_argument("--x1", type=str, help="End of a straight trace.")
    parser.add_argument("--path", type=str, help='Waypoints "x1,x2,...".')
    parser.add_argument("--rect", type=str, help='Grid rectangle "xmin,xmax,ymin,ymax".')
    parser.add_argument("--nx", type=int, default=41, help="Grid nodes along Re x.")
    parser.add_argument("--ny", type=int, default=41, help="Grid nodes along Im x.")
    parser.add_argument("--tol", type=str, default="1e-9", help="Step tolerance.")
    parser.add_argument("--budget", type=str, default="12", help="Series budget.")
    parser.add_argument("--alpha-scan", type=str, dest="alpha_scan", help='Scan "a:b:step".')
    parser.add_argument(
        "--compare-asym",
        action="store_true",
        dest="compare_asym",
        help="Add leading-term comparisons to eval.",
    )
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--output", type=str, help="Output file, default stdout.")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the verify suite.")
    parser.add_argument(
        "--log-level",
        dest="log_level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    return parser


def _split(text: str, separator: str, count: int | None, what: str) -> list[str]:
    parts = [part.strip() for part in text.split(separator)]
    if count is not None and len(parts) != count:
        raise UsageError(f"{what} needs {count} fields separated by '{separator}'")
    if not all(parts):
        raise UsageError(f"{what} has an empty field: {text!r}")
    return parts


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Validated run configuration from command-line arguments.

    Raises:
        UsageError: On unknown subcommands, malformed or missing values.

    """
    args = _build_parser().parse_args(list(argv))
    sub = args.subcommand

    if args.alpha is None and (sub in _NEEDS_ALPHA or (sub == "asym" and not args.alpha_scan)):
        raise UsageError(f"{sub} needs --alpha")
    if sub == "eval" and args.x is None:
        raise UsageError("eval needs --x")
    if sub == "trace" and args.x1 is None and args.path is None:
        raise UsageError("trace needs --x1 or --path")
    if sub == "grid" and args.rect is None:
        raise UsageError("grid needs --rect")

    try:
        params = SolutionParams(
            n=args.n,
            alpha=parse_complex(args.alpha) if args.alpha is not None else 1,
            d1=parse_complex(args.d1),
            d2=parse_complex(args.d2),
        )

        path: list[complex] | None = None
        if args.path is not None:
            path = [parse_complex(part) for part in _split(args.path, ",", None, "--path")]
        elif args.x1 is not None:
            path = [parse_complex(args.x1)]

        grid_spec = None
        if args.rect is not None:
            x_min, x_max, y_min, y_max = (
                parse_real(part) for part in _split(args.rect, ",", 4, "--rect")
            )
            grid_spec = GridSpec(
                x_min=x_min, x_max=x_max, y_min=y_min, y_max=y_max, nx=args.nx, ny=args.ny
            )

        scan = None
        if args.alpha_scan is not None:
            start, stop, step = (
                parse_real(part) for part in _split(args.alpha_scan, ":", 3, "--alpha-scan")
            )
            scan = AlphaScan(start=start, stop=stop, step=step)

        return RunConfig(
            subcommand=sub,
            params=params,
            x=parse_complex(args.x) if args.x is not None else None,
            x0=parse_complex(args.x0) if args.x0 is not None else None,
            path=path,
            grid=grid_spec,
            alpha_scan=scan,
            tol=parse_real(args.tol),
            budget=parse_real(args.budget),
            compare_asym=args.compare_asym,
            output=args.output,
            format=args.format,
            seed=args.seed,
            log_level=args.log_level,
        )
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc


# ===== rendering


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json(payload: Any) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _quantities(config: RunConfig, values: list[tuple[str, complex]]) -> str:
    if config.format == "json":
        return _json({name: complex_to_json(value) for name, value in values})
    return _csv(
        ("quantity", "re", "im"),
        ((name, value.real, value.imag) for name, value in values),
    )


# ===== subcommands


def _run_eval(config: RunConfig) -> str:
    params = config.params
    assert config.x is not None
    x = config.x

    paths = {
        "determinant": u_n_determinant(params, x),
        "backlund": u_n_backlund(params, x),
        "recurrence": u_n_recurrence(params, x),
    }
    values: list[tuple[str, complex]] = []
    for name, jet in paths.items():
        values.append((f"u_{name}", jet.u))
        values.append((f"du_{name}", jet.du))
    names = list(paths)
    for i, left in enumerate(names):
        for right in names[i + 1 :]:
            gap = abs(paths[left].u - paths[right].u)
            values.append((f"diff_{left}_{right}", complex(gap)))

    if config.compare_asym:
        leading = u_leading(params, x)
        values.append(("u_leading", leading))
        values.append(("asym_ratio", paths["determinant"].u / leading))

        following = params.with_n(params.n + 1)
        regime = delta_leading(following)
        raw = delta(following.n, params.alpha, x, params.d1, params.d2)
        values.append(("scaled_delta", raw * (x / 2) ** (-regime.exponent)))
        values.append(("delta_ratio", raw / delta_leading_value(following, x)))

    return _quantities(config, values)


def _run_asym(config: RunConfig) -> str:
    if config.alpha_scan is not None:
        scan = config.alpha_scan
        records = leading_power_scan(config.params.n, scan.start, scan.stop, scan.step)
        if config.format == "json":
            return _json(records)
        return _csv(
            ("alpha", "delta_exponent", "u_exponent"),
            (
                (
                    record["alpha"],
                    "" if record["delta_exponent"] is None else record["delta_exponent"],
                    "" if record["u_exponent"] is None else record["u_exponent"],
                )
                for record in records
            ),
        )

    regime = u_regime(config.params)
    return _json(regime.model_dump(mode="json", by_alias=True, exclude={"subject"}))


def _run_expand(config: RunConfig) -> str:
    series = expand_u(config.params, config.budget)
    rows = []
    for key, value in series.ordered():
        exponent = series.exponent(key)
        rows.append((key[0], key[1], exponent.real, exponent.imag, value.real, value.imag))
    if config.format == "json":
        return _json(
            {
                "p": complex_to_json(series.p),
                "order": series.order,
                "terms": [dict(zip(_EXPAND_COLUMNS, row)) for row in rows],
            }
        )
    return _csv(_EXPAND_COLUMNS, rows)


def _start_state(config: RunConfig) -> tuple[ChartState, float | None]:
    params = config.params
    if config.x0 is None:
        state, seed_error = seed_state(params, SEED_X, config.budget)
        logger.info("series seed at x=%s, error estimate %.2e", SEED_X, seed_error)
        return state, seed_error

    jet = u_n_determinant(params, config.x0)
    state = ChartState(x=jet.x, y=jet.u, dy=jet.du, chart="U", params=params.piii())
    return (chart_switch(state) if abs(jet.u) > SWITCH_OUT else state), None


def _run_trace(config: RunConfig) -> str:
    assert config.path is not None
    start, seed_error = _start_state(config)
    trajectory = trace(start, config.path, config.tol, seed_error)
    columns = ("x_re", "x_im", "u_re", "u_im", "chart")
    rows = []
    for state in trajectory.samples:
        u = state.u()
        rows.append((state.x.real, state.x.imag, u.real, u.imag, state.chart))
    summary = {
        "steps": trajectory.steps,
        "rejected": trajectory.rejected,
        "switches": trajectory.switches,
        "seed_error": trajectory.seed_error,
    }
    if config.format == "json":
        return _json({**summary, "samples": [dict(zip(columns, row)) for row in rows]})
    header = " ".join(f"{key}={value}" for key, value in summary.items())
    return f"# {header}\n" + _csv(columns, rows)


def _run_grid(config: RunConfig) -> str:
    assert config.grid is not None
    result = grid(config.params, config.grid, config.tol, config.budget)
    real_nodes = config.grid.real_nodes()
    imag_nodes = config.grid.imag_nodes()
    rows = []
    for j, im in enumerate(imag_nodes):
        for k, re in enumerate(real_nodes):
            value = complex(result.values[k, j])
            rows.append((float(re), float(im), value.real, value.imag, str(result.status[k, j])))
    if config.format == "json":
        return _json(
            [dict(zip(("x_re", "x_im", "u_re", "u_im", "status"), row)) for row in rows]
        )
    return _csv(("x_re", "x_im", "u_re", "u_im", "status"), rows)


def _run_verify(config: RunConfig) -> tuple[str, int]:
    report = run_suite(seed=config.seed)
    code = EXIT_OK if report.failures == 0 else EXIT_FAILED_CHECKS
    if config.format == "json":
        return _json(report.model_dump(mode="json")), code
    header = f"# seed={report.seed} fast={report.fast} passes={report.passes} failures={report.failures}\n"
    body = _csv(
        ("check", "passed", "cases", "worst"),
        ((check.name, check.passed, check.cases, check.worst) for check in report.checks),
    )
    return header + body, code


async def _write(path: str, text: str):
    async with aopen(path, "w") as f:
        await f.write(text)


def _emit(config: RunConfig, text: str):
    if config.output is None:
        sys.stdout.write(text)
    else:
        asyncio.run(_write(config.output, text))


def run(config: RunConfig) -> int:
    """Execute a configuration and return the exit code."""
    try:
        code = EXIT_OK
        match config.subcommand:
            case "eval":
                text = _run_eval(config)
            case "asym":
                text = _run_asym(config)
            case "expand":
                text = _run_expand(config)
            case "trace":
                text = _run_trace(config)
            case "grid":
                text = _run_grid(config)
            case "verify":
                text, code = _run_verify(config)
        _emit(config, text)
        return code
    except UsageError as exc:
        print(f"p3fox: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"p3fox: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"p3fox: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except P3Error as exc:
        print(f"p3fox: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=config.log_level,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    return run(config)
