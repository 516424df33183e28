"""Command-line surface: single-point evaluation, 1D sweeps, 2D surfaces,
three-route verification runs, and peak reports, emitted as CSV or JSON.

CSV cells use 17-significant-digit scientific notation and line-feed line
endings, so every double round-trips exactly.  JSON numbers are emitted at
full precision.  A JSON config file can mirror any flag; explicit flags
take precedence over file values.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from .model import ModelParams, ThermoState
from .oracle import three_route_report
from .sweep import GridSpec, SweepTable, find_peak, sweep_1d, sweep_2d
from .thermo import fd_verify, thermo_point

STANDARD_COLUMNS = ("beta", "T", "h", "J", "q", "f", "S", "m", "chi", "C")


@dataclass
class RunConfig:
    """Validated bundle of one command invocation."""

    command: str
    params: ModelParams | None
    state: ThermoState | None
    grids: tuple[GridSpec, ...]
    out: str | None
    format: str
    n: int
    tolerance: float
    observable: str


def _fmt(value: float) -> str:
    return f"{value:.16e}"


def _row_values(row) -> list:
    p = row.point
    return [row.beta, 1.0 / row.beta, row.h, row.J, row.q, p.f, p.S, p.m, p.chi, p.C]


def table_columns(table: SweepTable) -> list[str]:
    return [g.axis for g in table.axes] + list(STANDARD_COLUMNS)


def table_to_csv(table: SweepTable) -> str:
    lines = [",".join(table_columns(table))]
    for row in table.rows:
        cells = [_fmt(c) for c in row.coords]
        for v in _row_values(row):
            cells.append(str(v) if isinstance(v, int) else _fmt(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def table_to_json(table: SweepTable) -> str:
    meta = {
        "base": {
            "q": table.base_params.q,
            "J": table.base_params.J,
            "h": table.base_params.h,
            "beta": None if table.base_state is None else table.base_state.beta,
        },
        "grids": [asdict(g) for g in table.axes],
        "columns": table_columns(table),
    }
    rows = [list(row.coords) + _row_values(row) for row in table.rows]
    return json.dumps({"metadata": meta, "rows": rows}, indent=None)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _add_model_flags(sub):
    sub.add_argument("--q", type=int, default=None, help="spin-state count (>= 2)")
    sub.add_argument("--J", type=float, default=None, help="exchange coupling")
    sub.add_argument("--h", type=float, default=None, help="agreement field")
    sub.add_argument("--beta", type=float, default=None, help="inverse temperature")
    sub.add_argument("--T", type=float, default=None, help="temperature (alternative to --beta)")
    sub.add_argument("--config", default=None, help="JSON file mirroring flags; flags override")


def _add_grid_flags(sub, second: bool = False):
    sub.add_argument("--axis", default=None, help="grid axis: beta, T, h, J or q")
    sub.add_argument("--min", type=float, default=None, help="grid lower endpoint")
    sub.add_argument("--max", type=float, default=None, help="grid upper endpoint")
    sub.add_argument("--steps", type=int, default=None, help="number of grid points (>= 2)")
    if second:
        sub.add_argument("--axis2", default=None, help="second grid axis")
        sub.add_argument("--min2", type=float, default=None)
        sub.add_argument("--max2", type=float, default=None)
        sub.add_argument("--steps2", type=int, default=None)


def _add_output_flags(sub):
    sub.add_argument("--out", default=None, help="output path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="potts1d",
        description="Exact transfer-matrix thermodynamics of the 1D q-state "
        "chain with agreement-coupled exchange and field terms.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("point", help="evaluate f, S, m, chi, C at one point")
    _add_model_flags(p)

    p = commands.add_parser("sweep", help="1D parameter sweep")
    _add_model_flags(p)
    _add_grid_flags(p)
    _add_output_flags(p)

    p = commands.add_parser("surface", help="2D parameter grid")
    _add_model_flags(p)
    _add_grid_flags(p, second=True)
    _add_output_flags(p)

    p = commands.add_parser("verify", help="three-route partition check plus derivative check")
    _add_model_flags(p)
    p.add_argument("--n", type=int, default=None, help="chain length for the oracle routes (default 6)")
    p.add_argument("--tolerance", type=float, default=None, help="relative tolerance (default 1e-10)")

    p = commands.add_parser("peaks", help="grid peak of one observable")
    _add_model_flags(p)
    _add_grid_flags(p)
    p.add_argument(
        "--observable",
        choices=("f", "S", "m", "chi", "C"),
        default=None,
        help="observable to maximize (default chi)",
    )

    return parser


def _merge_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if getattr(args, "config", None) is None:
        return
    try:
        with open(args.config) as fh:
            file_values = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        parser.error(f"cannot read config file: {err}")
    if not isinstance(file_values, dict):
        parser.error("config file must hold a JSON object")
    # beta and T name the same quantity, so either flag overrides both keys
    thermal_flag_given = args.beta is not None or args.T is not None
    for key, value in file_values.items():
        if not hasattr(args, key):
            parser.error(f"unknown config key {key!r}")
        if key in ("beta", "T") and thermal_flag_given:
            continue
        if getattr(args, key) is None:
            setattr(args, key, value)


def _resolve_state(args, parser, required: bool) -> ThermoState | None:
    if args.beta is not None and args.T is not None:
        parser.error("give exactly one of --beta / --T")
    if args.beta is not None:
        return ThermoState(args.beta)
    if args.T is not None:
        return ThermoState.from_temperature(args.T)
    if required:
        parser.error("one of --beta / --T is required")
    return None


def _resolve_params(args, parser, skip: set[str]) -> ModelParams:
    values = {}
    defaults = {"q": 2, "J": 0.0, "h": 0.0}
    for name in ("q", "J", "h"):
        v = getattr(args, name)
        if v is None:
            if name in skip:
                v = defaults[name]  # placeholder, replaced by the sweep axis
            else:
                parser.error(f"--{name} is required")
        values[name] = v
    return ModelParams(**values)


def _resolve_grid(args, parser, suffix: str = "") -> GridSpec:
    missing = [f"--{k}{suffix}" for k in ("axis", "min", "max", "steps")
               if getattr(args, k + suffix) is None]
    if missing:
        parser.error(f"missing grid flags: {', '.join(missing)}")
    return GridSpec(
        axis=getattr(args, "axis" + suffix),
        min=getattr(args, "min" + suffix),
        max=getattr(args, "max" + suffix),
        steps=getattr(args, "steps" + suffix),
    )


def parse_run_config(argv) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    _merge_config_file(args, parser)
    command = args.command

    grids: tuple[GridSpec, ...] = ()
    params = None
    state = None
    if command == "point":
        params = _resolve_params(args, parser, skip=set())
        state = _resolve_state(args, parser, required=True)
    elif command in ("sweep", "peaks"):
        grid = _resolve_grid(args, parser)
        grids = (grid,)
        swept = {grid.axis} if grid.axis in ("q", "J", "h") else set()
        params = _resolve_params(args, parser, skip=swept)
        state = _resolve_state(args, parser, required=grid.axis not in ("beta", "T"))
    elif command == "surface":
        gx = _resolve_grid(args, parser)
        gy = _resolve_grid(args, parser, suffix="2")
        grids = (gx, gy)
        swept = {g.axis for g in grids if g.axis in ("q", "J", "h")}
        params = _resolve_params(args, parser, skip=swept)
        need_state = not any(g.axis in ("beta", "T") for g in grids)
        state = _resolve_state(args, parser, required=need_state)
    elif command == "verify":
        params = _resolve_params(args, parser, skip=set())
        state = _resolve_state(args, parser, required=True)

    def _default(name, fallback):
        value = getattr(args, name, None)
        return fallback if value is None else value

    return RunConfig(
        command=command,
        params=params,
        state=state,
        grids=grids,
        out=getattr(args, "out", None),
        format=_default("format", "csv"),
        n=_default("n", 6),
        tolerance=_default("tolerance", 1e-10),
        observable=_default("observable", "chi"),
    )


def run(config: RunConfig) -> int:
    """Execute a validated command; returns the process exit status."""
    if config.command == "point":
        point = thermo_point(config.params, config.state)
        for name in ("f", "S", "m", "chi", "C"):
            print(f"{name} = {getattr(point, name)!r}")
        return 0

    if config.command == "sweep":
        table = sweep_1d(config.params, config.state, config.grids[0])
        text = table_to_csv(table) if config.format == "csv" else table_to_json(table)
        _emit(text, config.out)
        return 0

    if config.command == "surface":
        table = sweep_2d(config.params, config.state, config.grids[0], config.grids[1])
        text = table_to_csv(table) if config.format == "csv" else table_to_json(table)
        _emit(text, config.out)
        return 0

    if config.command == "peaks":
        table = sweep_1d(config.params, config.state, config.grids[0])
        coord, value = find_peak(table, config.observable)
        print(f"peak[{config.observable}] {config.grids[0].axis} = {coord!r} value = {value!r}")
        return 0

    if config.command == "verify":
        report = three_route_report(config.params, config.state, config.n)
        fd = fd_verify(config.params, config.state)
        print(f"ln_Z enumeration  = {report.ln_Z_enumeration!r}")
        print(f"ln_Z trace power  = {report.ln_Z_trace_power!r}")
        print(f"ln_Z eigen sum    = {report.ln_Z_eigen!r}")
        print(f"finite-N free energy (N={config.n}) = {report.finite_N_free_energy!r}")
        print(f"max relative discrepancy = {report.max_relative_discrepancy!r}")
        for name, err in fd.errors().items():
            print(f"fd check {name}: relative error {err!r}")
        ok = report.max_relative_discrepancy <= config.tolerance and fd.passed
        print("verify: PASS" if ok else "verify: FAIL")
        return 0 if ok else 1

    raise ValueError(f"unknown command {config.command!r}")


def main(argv=None) -> int:
    try:
        config = parse_run_config(argv)
        return run(config)
    except SystemExit as err:
        # argparse uses exit status 2 for usage errors
        return int(err.code) if err.code is not None else 0
    except (ValueError, OverflowError) as err:
        print(str(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
