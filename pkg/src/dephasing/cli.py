#!/usr/bin/env python3
"""
Exact dephasing of qubit registers: command-line front end.

Subcommands:
    single    single-qubit coherence trace
    pair      two-qubit coherence trace (independent or collective coupling)
    register  any L-qubit element, closed-form, quadrature or finite-mode oracle
    table     recompute a published decoherence-time table (1, 2 or 3)
    figure    grid data for a published figure (1..8)
    modes     Riemann-sample a bath into a modes file for the oracle
    verify    re-read a trace, figure or table file and re-check its invariants

Times are in cutoff units (tau = omega_c t), temperature as theta = omega_T / omega_c.
Every subcommand accepts --config FILE (JSON or YAML, keys = flag names);
explicit flags win over the file.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure, 130 interrupted.

Examples:
    python cli.py single --d 3 --c 0.25 --theta 1e-5 --tmax 100
    python cli.py pair --coupling independent --d 1 --c 0.25 --theta 1e-3 --ts 0.5 --branch plus
    python cli.py table 3 --out table3.csv
    python cli.py figure 7 --format parquet --out fig7.parquet
"""

import argparse
import logging
import sys

import numpy as np
import pandas as pd
from tqdm import tqdm

import analysis
import io_utils
import log_setup
import published
import schema
from bath import CLOSED_FORM_DIMENSIONS, FLUCTUATIONS, BathSpec
from closedform import PairBranch, PairCase
from kernels import DEFAULT_CONFIG, QuadratureConfig, QuadratureError
from register import (
    CoherenceLabel,
    RegisterGeometry,
    default_upper,
    dfs_classify,
    discrete_functions,
    f_of_L,
    f_of_L_collective,
    sample_modes,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_INTERRUPTED = 130

CLOSED_UNAVAILABLE = "closed form unavailable; use --method quadrature"

# Tolerances for re-checking written CSVs (values carry 10 significant digits)
VERIFY_RTOL = 1e-8
VERIFY_ATOL = 1e-12
THRESHOLD_ATOL = 1e-6


class ConfigError(ValueError):
    """Invalid flags or config file."""


# -- shared flags -------------------------------------------------------------


def _add_bath_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, default=1, help="Bath dimensionality: 1 Ohmic, 3 super-Ohmic (default: 1)")
    parser.add_argument("--c", type=float, default=0.25, help="Coupling strength c_d (default: 0.25)")
    parser.add_argument("--theta", type=float, default=1e-3, help="Temperature ratio omega_T/omega_c (default: 1e-3)")


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tmax", type=float, default=10.0, help="Last time point, cutoff units (default: 10)")
    parser.add_argument("--points", type=int, default=201, help="Number of time points (default: 201)")
    parser.add_argument(
        "--grid",
        choices=("linear", "log"),
        default="linear",
        help="Linear grid from 0, or 0 followed by a log grid ending at tmax (default: linear)",
    )


def _add_quadrature_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--abs-tol", type=float, default=DEFAULT_CONFIG.abs_tol, help="Quadrature absolute tolerance")
    parser.add_argument("--rel-tol", type=float, default=DEFAULT_CONFIG.rel_tol, help="Quadrature relative tolerance")
    parser.add_argument(
        "--max-subdivisions",
        type=int,
        default=DEFAULT_CONFIG.max_subdivisions,
        help="Panel budget before the Fourier-weighted tail takes over",
    )
    parser.add_argument(
        "--cutoff-multiplier",
        type=float,
        default=DEFAULT_CONFIG.cutoff_multiplier,
        help="Upper integration limit in units of max(1, theta)",
    )


def _add_output_flags(parser: argparse.ArgumentParser, formats: bool = False) -> None:
    parser.add_argument("--out", type=str, default=None, help="Output path (default: stdout)")
    if formats:
        parser.add_argument("--format", choices=io_utils.FORMATS, default="csv", help="Output format (default: csv)")


def _add_times_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--times-out",
        type=str,
        default=None,
        help="Also write tau_dec / t_f / residual / recoherence as JSON to this path ('-' for stdout)",
    )


def _quadrature_config(args: argparse.Namespace) -> QuadratureConfig:
    return QuadratureConfig(
        abs_tol=args.abs_tol,
        rel_tol=args.rel_tol,
        max_subdivisions=args.max_subdivisions,
        cutoff_multiplier=args.cutoff_multiplier,
    )


def _bath(args: argparse.Namespace) -> BathSpec:
    bath = BathSpec(args.d, args.c, args.theta)
    if getattr(args, "method", "closed") == "closed" and args.d not in CLOSED_FORM_DIMENSIONS:
        raise ConfigError(CLOSED_UNAVAILABLE)
    return bath


def _time_grid(args: argparse.Namespace) -> np.ndarray:
    if args.tmax < 0:
        raise ConfigError(f"--tmax must be >= 0, got {args.tmax}")
    if args.points < 1:
        raise ConfigError(f"--points must be >= 1, got {args.points}")
    if args.tmax == 0 or args.points == 1:
        return np.array([0.0]) if args.tmax == 0 else np.array([0.0, args.tmax])
    if args.grid == "log":
        lo = args.tmax * 1e-6
        return np.concatenate([[0.0], np.geomspace(lo, args.tmax, args.points - 1)])
    return np.linspace(0.0, args.tmax, args.points)


def _write_times(times: analysis.DecoherenceTimes, path: str | None, extra: dict | None = None) -> None:
    if path is None:
        return
    data = times.to_dict()
    if extra:
        data.update(extra)
    io_utils.write_json(data, path)


# -- subcommands --------------------------------------------------------------


def cmd_single(args: argparse.Namespace) -> int:
    """Single-qubit trace exp(-Gamma_d) exp(i Theta_d) for the element (1,0)."""
    bath = _bath(args)
    taus = _time_grid(args)
    config = _quadrature_config(args)
    trace = analysis.single_trace(bath, taus, args.method, config, args.fluctuations)
    logger.info(
        "single d=%d c=%g theta=%g: %d points, final magnitude %.6g (%s)",
        bath.d, bath.c, bath.theta, len(taus), trace.magnitude[-1], trace.source,
    )
    io_utils.write_frame(trace.to_frame(), args.out)
    if args.times_out:
        geometry = RegisterGeometry.collective(1)
        label = CoherenceLabel.from_bits("1", "0")
        if args.method == "closed":
            times = analysis.single_times(bath.d, bath.c, bath.theta)
        else:
            times = analysis.register_times(bath, geometry, label, method=args.method, config=config)
        _write_times(times, args.times_out)
    return EXIT_OK


def cmd_pair(args: argparse.Namespace) -> int:
    """Two-qubit trace for one case (one-differs / both-differ) and branch (plus / minus)."""
    bath = _bath(args)
    taus = _time_grid(args)
    config = _quadrature_config(args)
    case = PairCase(args.case)
    branch = PairBranch(args.branch)
    trace = analysis.pair_trace(bath, args.ts, case, branch, taus, args.coupling, args.method, config)
    logger.info(
        "pair %s %s/%s ts=%g: final magnitude %.6g",
        args.coupling, case.value, branch.value, args.ts, trace.magnitude[-1],
    )
    io_utils.write_frame(trace.to_frame(), args.out)
    if args.times_out:
        if args.method == "closed":
            times = analysis.pair_times(bath.d, bath.c, bath.theta, args.ts, case, branch, args.coupling)
        else:
            geometry = RegisterGeometry.from_positions([0.0, args.ts])
            times = analysis.register_times(
                bath, geometry, analysis.pair_label(case, branch), args.coupling, args.method, config
            )
        _write_times(times, args.times_out)
    return EXIT_OK


def _register_labels(args: argparse.Namespace) -> list[CoherenceLabel]:
    labels = []
    if args.labels_file:
        labels += io_utils.read_labels_file(args.labels_file)
    for text in args.label or []:
        labels.append(CoherenceLabel.parse(text))
    for text in args.element or []:
        labels.append(CoherenceLabel.from_element(text))
    if not labels:
        raise ConfigError("register needs --labels-file, --label or --element")
    sizes = {label.size for label in labels}
    if len(sizes) != 1:
        raise ConfigError(f"All labels must have the same number of qubits, got sizes {sorted(sizes)}")
    return labels


def _register_geometry(args: argparse.Namespace, size: int) -> RegisterGeometry:
    if args.geometry_file:
        geometry = io_utils.read_geometry_file(args.geometry_file)
    elif args.positions:
        geometry = RegisterGeometry.from_positions(args.positions)
    elif args.coupling == "collective":
        geometry = RegisterGeometry.collective(size)
    else:
        geometry = RegisterGeometry.uniform(size, args.ts)
    if geometry.size != size:
        raise ConfigError(f"Geometry has {geometry.size} qubits but labels have {size}")
    return geometry


def _oracle_trace(args: argparse.Namespace, bath: BathSpec, label: CoherenceLabel, taus: np.ndarray) -> analysis.CoherenceTrace:
    modes = io_utils.read_modes_file(args.modes_file)
    if modes.qubits != label.size:
        raise ConfigError(f"Modes file has phases for {modes.qubits} qubits, label {label} has {label.size}")
    functions = [discrete_functions(modes, label, bath.theta, t) for t in taus]
    return analysis.CoherenceTrace.from_functions(taus, functions, "oracle")


def cmd_register(args: argparse.Namespace) -> int:
    """Trace every requested element; optional JSON summary with DFS class and f(L)."""
    bath = _bath(args)
    taus = _time_grid(args)
    config = _quadrature_config(args)
    labels = _register_labels(args)
    size = labels[0].size
    geometry = _register_geometry(args, size)
    if args.method == "oracle" and not args.modes_file:
        raise ConfigError("--method oracle needs --modes-file (see the modes subcommand)")

    frames = []
    summary = {"coupling": args.coupling, "size": size, "labels": {}}
    for label in tqdm(labels, desc="labels", disable=args.quiet):
        if args.method == "oracle":
            trace = _oracle_trace(args, bath, label, taus)
        else:
            trace = analysis.register_trace(
                bath, geometry, label, taus, args.coupling, args.method, config, args.fluctuations
            )
        frame = trace.to_frame()
        frame.insert(0, schema.LABEL, str(label))
        frames.append(frame)
        dfs = dfs_classify(label)
        entry = {"dfs": dfs.dfs, "damping_weight": dfs.damping_weight, "phase_weight": dfs.phase_weight}
        if args.times and args.method != "oracle":
            entry.update(
                analysis.register_times(bath, geometry, label, args.coupling, args.method, config).to_dict()
            )
        summary["labels"][str(label)] = entry
    if args.coupling == "collective":
        summary["f_of_L"] = f_of_L_collective(size)
    elif args.frequency is not None:
        summary["f_of_L"] = f_of_L(size, geometry, args.frequency)
    io_utils.write_frame(pd.concat(frames, ignore_index=True), args.out)
    if args.summary_out:
        io_utils.write_json(summary, args.summary_out)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    if args.id not in published.TABLES:
        raise ConfigError(f"Unknown table {args.id}; choose 1, 2 or 3")
    frame = analysis.make_table(args.id, progress=not args.quiet, quadrature=not args.skip_quadrature)
    io_utils.write_frame(io_utils.blank_missing(frame, [schema.QUADRATURE_DEVIATION]), args.out)
    failed = frame.loc[~frame[schema.MATCH]]
    if len(failed):
        logger.warning("Table %d: %d row(s) outside tolerance", args.id, len(failed))
    return EXIT_OK


def cmd_figure(args: argparse.Namespace) -> int:
    if args.id not in analysis.FIGURE_IDS:
        raise ConfigError(f"Unknown figure {args.id}; choose 1..8")
    frame = analysis.make_figure(args.id, args.points, _quadrature_config(args), progress=not args.quiet)
    logger.info("Figure %d: %d rows", args.id, len(frame))
    io_utils.write_frame(frame, args.out, args.format, na_rep="")
    return EXIT_OK


def cmd_modes(args: argparse.Namespace) -> int:
    bath = BathSpec(args.d, args.c, args.theta)
    positions = args.positions or [0.0]
    upper = default_upper(bath) if args.upper is None else args.upper
    modes = sample_modes(bath, positions, args.n_modes, upper)
    logger.info("Sampled %d modes on [0, %g] for %d qubit(s)", modes.size, upper, modes.qubits)
    io_utils.write_modes_file(modes, args.out)
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def _verify_trace(frame: pd.DataFrame) -> list[str]:
    problems = []
    groups = frame.groupby(schema.LABEL, sort=False) if schema.LABEL in frame else [("", frame)]
    for label, group in groups:
        name = f"label {label}: " if label else ""
        taus = group[schema.TAU].to_numpy(dtype=float)
        gamma = group[schema.GAMMA].to_numpy(dtype=float)
        mag = group[schema.MAGNITUDE].to_numpy(dtype=float)
        phase = group[schema.PHASE].to_numpy(dtype=float)
        aleph = group[schema.THETA_PHASE].to_numpy(dtype=float) - group[schema.LAMBDA_PHASE].to_numpy(dtype=float)
        if np.any(np.diff(taus) <= 0):
            problems.append(f"{name}tau is not strictly increasing")
        # exp(-gamma) underflows to 0 for very large exponents
        if np.any(mag > 1.0) or np.any(mag < 0.0) or np.any((mag == 0.0) & (gamma < 700.0)):
            problems.append(f"{name}magnitude outside (0, 1]")
        if np.any(gamma < 0):
            problems.append(f"{name}negative damping exponent")
        if not np.allclose(mag, np.exp(-gamma), rtol=VERIFY_RTOL, atol=VERIFY_ATOL):
            problems.append(f"{name}magnitude != exp(-gamma)")
        if not np.allclose(phase, aleph, rtol=VERIFY_RTOL, atol=VERIFY_ATOL * max(1.0, np.abs(aleph).max(initial=0.0))):
            problems.append(f"{name}phase != theta_phase - lambda_phase")
        if taus.size and taus[0] == 0 and abs(mag[0] - 1.0) > VERIFY_ATOL:
            problems.append(f"{name}magnitude at tau=0 is {mag[0]}, expected 1")
    return problems


def _verify_figure(frame: pd.DataFrame) -> list[str]:
    problems = []
    mag = pd.to_numeric(frame[schema.MAGNITUDE], errors="coerce").to_numpy(dtype=float)
    taus = pd.to_numeric(frame[schema.TAU], errors="coerce").to_numpy(dtype=float)
    if np.any(np.isnan(mag)):
        problems.append("missing magnitudes")
    if np.any(mag > 1.0) or np.any(mag < 0.0):
        problems.append("magnitude outside [0, 1]")
    start = mag[taus == 0.0]
    if not start.size:
        problems.append("no tau=0 points")
    elif np.any(np.abs(start - 1.0) > VERIFY_ATOL):
        problems.append(f"magnitude at tau=0 ranges down to {start.min()}, expected 1")
    components = set(frame[schema.COMPONENT])
    if {"total", "vacuum", "thermal"} <= components:
        try:
            wide = frame.set_index([schema.FIGURE, schema.PANEL, schema.THETA, schema.TAU, schema.COMPONENT])[
                schema.MAGNITUDE
            ].unstack(schema.COMPONENT)
        except ValueError:
            return problems + ["duplicate (panel, theta, tau, component) rows"]
        product = wide["vacuum"] * wide["thermal"]
        bad = ~np.isclose(wide["total"], product, rtol=VERIFY_RTOL, atol=VERIFY_ATOL)
        if bad.any():
            panel = wide.index[np.asarray(bad).nonzero()[0][0]][1]
            problems.append(f"panel {panel}: total != vacuum * thermal at {int(bad.sum())} point(s)")
    return problems


def _table_id(frame: pd.DataFrame) -> int:
    for table_id, cells in schema.TABLE_CELLS.items():
        if list(frame.columns[: len(schema.TABLE_PARAMETERS[table_id]) + len(cells)]) == (
            schema.TABLE_PARAMETERS[table_id] + cells
        ):
            return table_id
    raise ValueError("Not a table file: unexpected columns")


def _row_evaluator(table_id: int, row: pd.Series, cell: str):
    if table_id == 3:
        return analysis.single_evaluator(int(row[schema.DIMENSION]), row[schema.COUPLING], row[schema.THETA])
    d = 1 if table_id == 1 else 3
    branch = PairBranch(cell.rsplit("_", 1)[1])
    return analysis.pair_evaluator(
        d, row[schema.COUPLING], row[schema.THETA], row[schema.TAU_S], PairCase.BOTH_DIFFER, branch
    )


def _verify_table(frame: pd.DataFrame) -> list[str]:
    table_id = _table_id(frame)
    printed_rows = published.TABLES[table_id]
    cells = schema.TABLE_CELLS[table_id]
    n_params = len(schema.TABLE_PARAMETERS[table_id])
    problems = []
    if len(frame) != len(printed_rows):
        return [f"table {table_id}: {len(frame)} rows, expected {len(printed_rows)}"]
    for k, (row, printed) in enumerate(zip(frame.to_dict("records"), printed_rows)):
        row = pd.Series(row)
        for cell, text in zip(cells, printed[n_params:]):
            value = row[cell]
            expected = published.parse_cell(text)
            known = published.discrepancy(table_id, printed[:n_params], cell) is not None
            if known:
                # only the crossing itself is checked
                expected = None if np.isnan(value) else value
            if (expected is None) != bool(np.isnan(value)):
                problems.append(f"table {table_id} row {k + 1} {cell}: saturation differs from printed {text!r}")
                continue
            if expected is None:
                continue
            deviation = abs(value - expected) / abs(expected)
            if deviation > published.cell_tolerance(table_id, text):
                problems.append(f"table {table_id} row {k + 1} {cell}: {value:.6g} vs printed {text} ({deviation:.2e})")
            level = {"tau_dec": analysis.TAU_DEC_LEVEL, "t_f": analysis.T_F_LEVEL}.get(cell.split("_plus")[0].split("_minus")[0])
            if level is not None:
                magnitude = float(np.asarray(_row_evaluator(table_id, row, cell)(np.array([value])))[0])
                if abs(magnitude - level) > THRESHOLD_ATOL:
                    problems.append(f"table {table_id} row {k + 1} {cell}: magnitude {magnitude:.8g} at {value:.8g}, expected {level}")
        if not row[schema.MATCH]:
            problems.append(f"table {table_id} row {k + 1}: match flag is false")
    return problems


def cmd_verify(args: argparse.Namespace) -> int:
    frame = io_utils.read_frame(args.path)
    if set(schema.TRACE_COLUMNS) <= set(frame.columns):
        kind, problems = "trace", _verify_trace(frame)
    elif set(schema.FIGURE_COLUMNS) <= set(frame.columns):
        kind, problems = "figure", _verify_figure(frame)
    elif schema.MATCH in frame.columns:
        kind, problems = "table", _verify_table(frame)
    else:
        raise ConfigError(f"{args.path}: not a trace, figure or table file")
    for problem in problems:
        logger.error("%s", problem)
    if problems:
        logger.error("%s: %d check(s) failed", args.path, len(problems))
        return EXIT_INVALID
    logger.info("%s: all %s checks passed (%d rows)", args.path, kind, len(frame))
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        description="Exact dephasing of qubit registers in a bosonic bath",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--quiet", action="store_true", help="Only warnings and errors; no progress bars")
    subparsers = parser.add_subparsers(dest="command", required=True)
    commands = {}

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("--config", type=str, default=None, help="JSON or YAML file of flag values")
        sub.set_defaults(func=func)
        commands[name] = sub
        return sub

    single = add("single", cmd_single, "Single-qubit coherence trace")
    _add_bath_flags(single)
    _add_grid_flags(single)
    single.add_argument("--method", choices=("closed", "quadrature"), default="closed", help="Evaluation path (default: closed)")
    single.add_argument("--fluctuations", choices=FLUCTUATIONS, default="total", help="Vacuum, thermal or both (default: total)")
    _add_quadrature_flags(single)
    _add_output_flags(single)
    _add_times_flag(single)

    pair = add("pair", cmd_pair, "Two-qubit coherence trace")
    _add_bath_flags(pair)
    _add_grid_flags(pair)
    pair.add_argument("--coupling", choices=analysis.COUPLINGS, default="independent", help="Bath coupling (default: independent)")
    pair.add_argument("--ts", type=float, default=0.5, help="Transit time between the qubits (default: 0.5)")
    pair.add_argument("--case", choices=[c.value for c in PairCase], default=PairCase.BOTH_DIFFER.value, help="Which qubits are off-diagonal")
    pair.add_argument("--branch", choices=[b.value for b in PairBranch], default=PairBranch.PLUS.value, help="Plus or minus branch")
    pair.add_argument("--method", choices=("closed", "quadrature"), default="closed", help="Evaluation path (default: closed)")
    _add_quadrature_flags(pair)
    _add_output_flags(pair)
    _add_times_flag(pair)

    register = add("register", cmd_register, "Coherence traces of L-qubit register elements")
    _add_bath_flags(register)
    _add_grid_flags(register)
    register.add_argument("--labels-file", type=str, default=None, help="File with one 'ibits,jbits' label per line")
    register.add_argument("--label", action="append", default=None, help="Label as 'ibits,jbits', e.g. 111,000 (repeatable)")
    register.add_argument("--element", action="append", default=None, help="Per-qubit element notation, e.g. 10,01 (repeatable)")
    register.add_argument("--geometry-file", type=str, default=None, help="JSON/YAML with 'positions' or 'transit'")
    register.add_argument("--positions", type=float, nargs="+", default=None, help="Collinear positions in transit-time units, propagation order")
    register.add_argument("--ts", type=float, default=0.5, help="Nearest-neighbour transit time of a uniform chain (default: 0.5)")
    register.add_argument("--coupling", choices=analysis.COUPLINGS, default="independent", help="Bath coupling (default: independent)")
    register.add_argument("--method", choices=("closed", "quadrature", "oracle"), default="quadrature", help="Evaluation path (default: quadrature)")
    register.add_argument("--modes-file", type=str, default=None, help="Modes file for --method oracle")
    register.add_argument("--fluctuations", choices=FLUCTUATIONS, default="total", help="Vacuum, thermal or both (default: total)")
    register.add_argument("--frequency", type=float, default=None, help="Mode frequency x for the f(L) error-scaling factor")
    register.add_argument("--times", action="store_true", help="Include tau_dec / t_f per label in the summary")
    register.add_argument("--summary-out", type=str, default=None, help="Write DFS classification and f(L) as JSON")
    _add_quadrature_flags(register)
    _add_output_flags(register)

    table = add("table", cmd_table, "Recompute a published decoherence-time table")
    table.add_argument("id", type=int, help="Table number (1, 2 or 3)")
    table.add_argument(
        "--skip-quadrature",
        action="store_true",
        help="Leave the Ohmic closed-form vs quadrature deviation column empty",
    )
    _add_output_flags(table)

    figure = add("figure", cmd_figure, "Grid data behind a published figure")
    figure.add_argument("id", type=int, help="Figure number (1..8)")
    figure.add_argument("--points", type=int, default=41, help="Grid points per axis (default: 41)")
    _add_quadrature_flags(figure)
    _add_output_flags(figure, formats=True)

    modes = add("modes", cmd_modes, "Riemann-sample a bath into a modes file")
    _add_bath_flags(modes)
    modes.add_argument("--positions", type=float, nargs="+", default=None, help="Qubit positions (default: one qubit at 0)")
    modes.add_argument("--n-modes", type=int, default=10_000, help="Number of modes (default: 10000)")
    modes.add_argument("--upper", type=float, default=None, help="Highest frequency (default: 60 max(1, theta))")
    _add_output_flags(modes)

    verify = add("verify", cmd_verify, "Re-check the invariants of a trace, figure or table file")
    verify.add_argument("path", type=str, help="CSV or Parquet written by single, pair, register, figure or table")

    return parser, commands


def _apply_config(parser: argparse.ArgumentParser, sub: argparse.ArgumentParser, argv: list[str], path: str) -> argparse.Namespace:
    """Re-parse with config-file values as defaults, so explicit flags still win."""
    config = io_utils.load_config(path)
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    unknown = sorted(set(config) - set(actions))
    if unknown:
        raise ConfigError(f"Unknown key(s) in {path}: {', '.join(unknown)}")
    defaults = {}
    for key, value in config.items():
        action = actions[key]
        if isinstance(value, str) and action.type is not None:
            value = action.type(value)
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"{key}={value!r} in {path} is not one of {list(action.choices)}")
        defaults[key] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser, commands = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    log_setup.configure(args.quiet)
    try:
        if args.config:
            args = _apply_config(parser, commands[args.command], argv, args.config)
        return args.func(args)
    except KeyboardInterrupt:
        logger.error("Interrupted")
        return EXIT_INTERRUPTED
    except QuadratureError as e:
        logger.error("Numerical failure: %s (estimate %.6g, error %.3g)", e, e.estimate, e.error)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as e:
        logger.error("%s", e)
        return EXIT_INVALID
    except (RuntimeError, ArithmeticError) as e:
        logger.error("Numerical failure: %s", e)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
