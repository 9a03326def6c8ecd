"""Command-line interface and plot-data emitters.

Five subcommands: `spectrum` (all bound states at one coupling, JSON or CSV
summary plus per-state density CSVs), `staircase` (table-driven count scan),
`roots` (the two threshold sequences), `orbit` (raw shooting record for one
state), and `density` (reconstructed wavefunction for one state).

Outputs are deterministic: no timestamps, fixed file names, floats rendered
with %.12g, CSV with a header row and LF line endings, snake_case JSON keys.
Root tables are cached on disk as JSON keyed by truncation order and entry
count, with a sha256 checksum revalidated on every load.

Exit codes: 0 success, 2 bad parameters, 3 compute failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import BadParameter, DiracSolverError, DomainError
from .model import ModelParams
from .ode import DEFAULT_CONFIG, IntegratorConfig
from .roots import (
    RootMethod,
    RootTables,
    build_root_tables,
    default_order,
    interval_indices,
    nearest_entry_distance,
    root_tables_from_dict,
    root_tables_to_csv,
    root_tables_to_dict,
)
from .spectrum import (
    SpectrumSummary,
    enumerate_bound_states,
    find_eigenvalue,
    reconstruct_wavefunction,
    shoot,
    staircase,
)

__all__ = [
    "Command",
    "OutputFormat",
    "RunConfig",
    "run",
    "main",
    "emit_plot_data",
    "load_or_build_tables",
    "save_root_tables",
    "required_count",
    "summary_payload",
]

CACHE_FORMAT_VERSION = 1
FLOAT_FMT = "%.12g"
DEFAULT_TOL = 1e-8
TOL_MIN = 1e-12
TOL_MAX = 1e-2

# Eigenvalue tolerance used for the energy-vs-gamma plot panels; curve
# resolution on screen never benefits from tighter shooting.
PLOT_TOL_FLOOR = 1e-6


class Command(Enum):
    SPECTRUM = "spectrum"
    STAIRCASE = "staircase"
    ROOTS = "roots"
    ORBIT = "orbit"
    DENSITY = "density"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class RunConfig:
    """One validated CLI invocation."""

    command: Command
    gamma: float | None = None
    winding: int | None = None
    tol: float = DEFAULT_TOL
    gamma_range: tuple[float, float, int] | None = None
    output_dir: str = "."
    format: OutputFormat = OutputFormat.CSV
    table_count: int | None = None
    order: int | None = None
    threads: int = 1
    emit_plots: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.command, Command):
            raise BadParameter(f"unknown command {self.command!r}")
        if not isinstance(self.format, OutputFormat):
            raise BadParameter(f"unknown output format {self.format!r}")
        if not (TOL_MIN <= self.tol <= TOL_MAX):
            raise BadParameter(f"tol must lie in [{TOL_MIN}, {TOL_MAX}], got {self.tol}")
        if self.threads < 1:
            raise BadParameter("threads must be at least 1")
        if self.table_count is not None and self.table_count < 1:
            raise BadParameter("table count must be at least 1")
        if self.order is not None and self.order < 20:
            raise BadParameter("truncation order must be at least 20")
        if self.gamma_range is not None:
            lo, hi, steps = self.gamma_range
            if not (0.0 < lo < hi):
                raise BadParameter("gamma range needs 0 < min < max")
            if int(steps) != steps or steps < 2:
                raise BadParameter("gamma range needs an integer step count >= 2")


def _diag(message: str) -> None:
    print(f"dirac1d: {message}".splitlines()[0], file=sys.stderr)


def _fmt(x: float) -> str:
    return FLOAT_FMT % (x,)


def _round12(x: float) -> float:
    return float(_fmt(x))


def _jsonable(obj, round_floats: bool = True):
    if isinstance(obj, dict):
        return {k: _jsonable(v, round_floats) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, round_floats) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _round12(obj) if round_floats else obj
    if isinstance(obj, np.floating):
        return _jsonable(float(obj), round_floats)
    if isinstance(obj, np.integer):
        return int(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _write_json(path: Path, payload: dict, round_floats: bool = True) -> None:
    _write_text(path, json.dumps(_jsonable(payload, round_floats), indent=2) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif isinstance(cell, (int, np.integer)) and not isinstance(cell, bool):
                cells.append(str(int(cell)))
            else:
                cells.append(_fmt(float(cell)))
        lines.append(",".join(cells))
    _write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Root-table cache


def required_count(gamma_max: float) -> int:
    """Entries needed so both sequences extend past gamma_max."""
    return max(8, int(math.ceil(gamma_max / 2.3)) + 3)


def _cache_path(cache_dir: Path, count: int, order: int | None) -> Path:
    return cache_dir / f"root_tables_order{order or 0}_count{count}.json"


def _table_body(tables: RootTables) -> dict:
    body = {"format_version": CACHE_FORMAT_VERSION}
    body.update(root_tables_to_dict(tables))
    return body


def table_checksum(body: dict) -> str:
    canon = json.dumps(_jsonable(body, round_floats=False), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def save_root_tables(tables: RootTables, cache_dir: Path | str) -> Path:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    body = _table_body(tables)
    payload = dict(body)
    payload["checksum"] = table_checksum(body)
    path = _cache_path(cache_dir, tables.count, tables.order)
    _write_json(path, payload, round_floats=False)
    return path


def load_or_build_tables(
    count: int, order: int | None, cache_dir: Path | str
) -> RootTables:
    """Return cached tables when the checksum holds, else rebuild and cache."""
    cache_dir = Path(cache_dir)
    order_eff = order if order is not None else default_order(count)
    path = _cache_path(cache_dir, count, order_eff)
    if path.exists():
        try:
            payload = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            _diag(f"root-table cache {path.name} unreadable; rebuilding")
        else:
            stored = payload.pop("checksum", None)
            if (
                payload.get("format_version") == CACHE_FORMAT_VERSION
                and stored == table_checksum(payload)
            ):
                try:
                    return root_tables_from_dict(payload)
                except (KeyError, DiracSolverError):
                    _diag(f"root-table cache {path.name} invalid; rebuilding")
            else:
                _diag(f"root-table cache {path.name} failed checksum; rebuilding")
    tables = build_root_tables(count, RootMethod.IKEBE, order_eff)
    save_root_tables(tables, cache_dir)
    return tables


# ---------------------------------------------------------------------------
# Artifacts


def summary_payload(summary: SpectrumSummary, density_paths: list[str]) -> dict:
    return {
        "gamma": summary.gamma,
        "ground_winding": summary.ground_winding,
        "count": summary.count,
        "states": [
            {
                "winding": state.winding.value,
                "energy": state.energy,
                "low_confidence": state.low_confidence,
                "density_csv_path": path,
            }
            for state, path in zip(summary.states, density_paths)
        ],
    }


def _density_rows(state) -> zip:
    return zip(state.s_grid, state.thetas, state.density, state.u_samples, state.v_samples)


def _nudged(tables: RootTables, gamma: float) -> float:
    if nearest_entry_distance(tables, gamma) < 1e-9:
        return gamma + 1e-9
    return gamma


def emit_plot_data(
    gamma: float,
    tol: float,
    tables: RootTables,
    output_dir: Path | str,
    gamma_range: tuple[float, float, int] | None = None,
    ode_config: IntegratorConfig = DEFAULT_CONFIG,
) -> list[Path]:
    """Write one CSV per figure panel; return the paths in a fixed order.

    Panels: theta-vs-s, rho-vs-s and the parametric (u, v) curve for every
    bound state at `gamma`; the bound-state count staircase over the gamma
    range; and the energy-vs-gamma curve of each winding alive anywhere in
    that range.  The same gamma grid serves the staircase and the curves.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = enumerate_bound_states(gamma, tol, tables, ode_config)
    paths: list[Path] = []
    for state in summary.states:
        n = state.winding.value
        trio = (
            (f"theta_vs_s_w{n}.csv", ["s", "theta"], zip(state.s_grid, state.thetas)),
            (f"rho_vs_s_w{n}.csv", ["s", "rho"], zip(state.s_grid, state.density)),
            (f"u_vs_v_w{n}.csv", ["u", "v"], zip(state.u_samples, state.v_samples)),
        )
        for name, header, rows in trio:
            path = out / name
            _write_csv(path, header, rows)
            paths.append(path)

    if gamma_range is None:
        gamma_range = (max(0.1, 0.25 * gamma), gamma + 2.0, 25)
    lo, hi, steps = gamma_range
    stair_rows = staircase(lo, hi, int(steps), tables)
    stair_path = out / "staircase.csv"
    _write_csv(stair_path, ["gamma", "ground_winding", "count"], stair_rows)
    paths.append(stair_path)

    plot_tol = max(tol, PLOT_TOL_FLOOR)
    curves: dict[int, list[tuple[float, float]]] = {}
    for g, ground, count in stair_rows:
        g_eval = _nudged(tables, g)
        for winding in range(ground, ground + count):
            energy = find_eigenvalue(g_eval, winding, plot_tol, tables, ode_config)
            if energy is not None:
                curves.setdefault(winding, []).append((g, energy))
    for winding in sorted(curves):
        path = out / f"energy_vs_gamma_w{winding}.csv"
        _write_csv(path, ["gamma", "energy"], curves[winding])
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# Dispatch


def _need_gamma(config: RunConfig) -> float:
    if config.gamma is None:
        raise BadParameter(f"{config.command.value} requires --gamma")
    if not (config.gamma > 0.0 and math.isfinite(config.gamma)):
        raise BadParameter(f"gamma must be positive and finite, got {config.gamma}")
    return config.gamma


def _need_winding(config: RunConfig) -> int:
    if config.winding is None:
        raise BadParameter(f"{config.command.value} requires --winding")
    if config.winding < 0:
        raise BadParameter("winding must be non-negative")
    return config.winding


def _tables_for(config: RunConfig, gamma_max: float, out: Path) -> RootTables:
    count = config.table_count or required_count(gamma_max)
    return load_or_build_tables(count, config.order, out)


def _single_state(config: RunConfig, out: Path):
    gamma = _need_gamma(config)
    winding = _need_winding(config)
    tables = _tables_for(config, gamma, out)
    energy = find_eigenvalue(gamma, winding, config.tol, tables)
    if energy is None:
        raise DomainError(f"no bound state with winding {winding} at gamma = {_fmt(gamma)}")
    params = ModelParams(gamma, energy)
    orbit, _ = shoot(params, winding)
    return params, orbit, energy


def _dispatch(config: RunConfig) -> list[Path]:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if config.command is Command.ROOTS:
        count = config.table_count or 20
        tables = load_or_build_tables(count, config.order, out)
        if config.format is OutputFormat.CSV:
            path = out / "roots.csv"
            _write_text(path, root_tables_to_csv(tables))
        else:
            path = out / "roots.json"
            _write_json(path, root_tables_to_dict(tables))
        written.append(path)

    elif config.command is Command.SPECTRUM:
        gamma = _need_gamma(config)
        tables = _tables_for(config, gamma, out)
        summary = enumerate_bound_states(gamma, config.tol, tables)
        density_paths = []
        for state in summary.states:
            name = f"density_w{state.winding.value}.csv"
            _write_csv(out / name, ["s", "theta", "rho", "u", "v"], _density_rows(state))
            written.append(out / name)
            density_paths.append(name)
        payload = summary_payload(summary, density_paths)
        if config.format is OutputFormat.JSON:
            path = out / "spectrum.json"
            _write_json(path, payload)
        else:
            path = out / "spectrum.csv"
            _write_csv(
                path,
                ["winding", "energy", "low_confidence", "density_csv_path"],
                [
                    (s["winding"], s["energy"], str(int(s["low_confidence"])), s["density_csv_path"])
                    for s in payload["states"]
                ],
            )
        written.append(path)
        if config.emit_plots:
            written.extend(
                emit_plot_data(gamma, config.tol, tables, out, config.gamma_range)
            )

    elif config.command is Command.STAIRCASE:
        if config.gamma_range is None:
            raise BadParameter("staircase requires --gamma-range MIN MAX STEPS")
        lo, hi, steps = config.gamma_range
        tables = _tables_for(config, hi, out)
        rows = staircase(lo, hi, int(steps), tables)
        if config.format is OutputFormat.JSON:
            path = out / "staircase.json"
            _write_json(
                path,
                {
                    "staircase": [
                        {"gamma": g, "ground_winding": n, "count": c} for g, n, c in rows
                    ]
                },
            )
        else:
            path = out / "staircase.csv"
            _write_csv(path, ["gamma", "ground_winding", "count"], rows)
        written.append(path)

    elif config.command is Command.ORBIT:
        params, orbit, energy = _single_state(config, out)
        rows = zip(orbit.taus, orbit.zs, orbit.thetas, orbit.theta_dots)
        if config.format is OutputFormat.JSON:
            path = out / f"orbit_w{config.winding}.json"
            _write_json(
                path,
                {
                    "gamma": params.gamma,
                    "winding": config.winding,
                    "energy": energy,
                    "terminal": orbit.terminal.kind.value,
                    "samples": [
                        {"s": s, "z": z, "theta": t, "theta_dot": td}
                        for s, z, t, td in rows
                    ],
                },
            )
        else:
            path = out / f"orbit_w{config.winding}.csv"
            _write_csv(path, ["s", "z", "theta", "theta_dot"], rows)
        written.append(path)

    elif config.command is Command.DENSITY:
        params, orbit, energy = _single_state(config, out)
        state = reconstruct_wavefunction(orbit, params)
        if config.format is OutputFormat.JSON:
            path = out / f"density_w{config.winding}.json"
            _write_json(
                path,
                {
                    "gamma": params.gamma,
                    "winding": config.winding,
                    "energy": energy,
                    "normalization_residual": state.normalization_residual,
                    "low_confidence": state.low_confidence,
                    "s": list(state.s_grid),
                    "theta": list(state.thetas),
                    "rho": list(state.density),
                    "u": list(state.u_samples),
                    "v": list(state.v_samples),
                },
            )
        else:
            path = out / f"density_w{config.winding}.csv"
            _write_csv(path, ["s", "theta", "rho", "u", "v"], _density_rows(state))
        written.append(path)

    return written


def run(config: RunConfig) -> int:
    """Execute one invocation: 0 success, 2 bad parameters, 3 compute failure."""
    try:
        written = _dispatch(config)
    except BadParameter as exc:
        _diag(str(exc))
        return 2
    except DiracSolverError as exc:
        _diag(str(exc))
        return 3
    for path in written:
        print(path)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # one-line diagnostics, exit code 2
        _diag(message)
        raise SystemExit(2)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--tol", type=float, default=DEFAULT_TOL, help="eigenvalue tolerance")
    sub.add_argument("--output-dir", default=".", help="directory for all artifacts")
    sub.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default="csv",
        help="primary artifact format",
    )
    sub.add_argument("--table-count", type=int, default=None, help="threshold entries to tabulate")
    sub.add_argument("--order", type=int, default=None, help="tridiagonal truncation order")
    sub.add_argument(
        "--threads", type=int, default=1,
        help="worker threads (validated; current implementation is single-threaded)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dirac1d", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", help="all bound states at one coupling")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--plots", action="store_true", help="also write per-panel plot CSVs")
    sp.add_argument(
        "--gamma-range", type=float, nargs=3, metavar=("MIN", "MAX", "STEPS"),
        default=None, help="gamma grid for the plot panels",
    )
    _add_common(sp)

    st = subs.add_parser("staircase", help="bound-state count over a gamma grid")
    st.add_argument(
        "--gamma-range", type=float, nargs=3, metavar=("MIN", "MAX", "STEPS"), required=True
    )
    _add_common(st)

    rt = subs.add_parser("roots", help="threshold sequences gamma_j / Gamma_j")
    _add_common(rt)

    for name, help_text in (
        ("orbit", "raw shooting record of one bound state"),
        ("density", "reconstructed wavefunction of one bound state"),
    ):
        cmd = subs.add_parser(name, help=help_text)
        cmd.add_argument("--gamma", type=float, required=True)
        cmd.add_argument("--winding", type=int, required=True)
        _add_common(cmd)

    return parser


def _range_triple(raw) -> tuple[float, float, int] | None:
    if raw is None:
        return None
    lo, hi, steps = raw
    if int(steps) != steps:
        raise BadParameter("gamma range step count must be an integer")
    return (float(lo), float(hi), int(steps))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            command=Command(args.command),
            gamma=getattr(args, "gamma", None),
            winding=getattr(args, "winding", None),
            tol=args.tol,
            gamma_range=_range_triple(getattr(args, "gamma_range", None)),
            output_dir=args.output_dir,
            format=OutputFormat(args.format),
            table_count=args.table_count,
            order=args.order,
            threads=args.threads,
            emit_plots=getattr(args, "plots", False),
        )
    except BadParameter as exc:
        _diag(str(exc))
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
