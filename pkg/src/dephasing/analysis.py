"""
Decoherence observables from coherence traces.

tau_dec is the first time the coherence magnitude falls to 0.98 (2% loss),
t_f the first time it falls to 0.01. When the magnitude never reaches 0.01,
t_f is reported as Saturates(residual), with the residual taken from the
analytic tau -> infinity limit when one is known.

Also builds the published tables and the figure grids.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd
from scipy.optimize import brentq
from tqdm import tqdm

import published
import schema
from bath import BathSpec
from closedform import (
    PairBranch,
    PairCase,
    gamma_closed,
    gamma_limit,
    pair_both_differ_exponent,
    pair_collective,
    pair_collective_limit,
    pair_limit,
    pair_one_differs_phase,
    theta_closed,
)
from kernels import (
    DEFAULT_CONFIG,
    NEGATIVE_GAMMA_TOLERANCE,
    DecoherenceFunctions,
    QuadratureConfig,
    QuadraturePrimitives,
)
from register import (
    CoherenceLabel,
    RegisterGeometry,
    collective_functions,
    dfs_classify,
    independent_functions,
)

logger = logging.getLogger(__name__)

COUPLINGS = ("independent", "collective")

TAU_DEC_LEVEL = 0.98
T_F_LEVEL = 0.01
HORIZON = 1e7
# Scans continue past HORIZON up to here when the analytic limit says the level is reached
MAX_HORIZON = 1e12
SCAN_START = 1e-4
POINTS_PER_DECADE = 60
ROOT_RTOL = 1e-8

# Recoherence noise guard
RISE_ABS = 1e-6
RISE_REL = 1e-3

# tau_dec seed from the quiet regime, Gamma ~ c tau^2 / 2
QUIET_EXPONENT = -np.log(TAU_DEC_LEVEL)

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Saturates:
    """Sentinel for a coherence that never drops to the t_f level."""

    residual: float


@dataclass(frozen=True)
class DecoherenceTimes:
    tau_dec: float | None
    t_f: float | Saturates
    recoherence: bool
    residual: float | None

    def __post_init__(self) -> None:
        if self.tau_dec is not None and isinstance(self.t_f, float) and not self.tau_dec < self.t_f:
            raise ValueError(f"tau_dec={self.tau_dec} must precede t_f={self.t_f}")

    @property
    def saturates(self) -> bool:
        return isinstance(self.t_f, Saturates)

    @property
    def t_decay(self) -> float | None:
        """Duration of the decoherence process, t_f - tau_dec."""
        if self.tau_dec is None or self.saturates:
            return None
        return self.t_f - self.tau_dec

    def to_dict(self) -> dict:
        return {
            "tau_dec": self.tau_dec,
            "t_f": schema.SATURATES if self.saturates else self.t_f,
            "saturates": self.saturates,
            "residual": self.residual,
            "recoherence": self.recoherence,
            "t_decay": self.t_decay,
        }


@dataclass
class CoherenceTrace:
    """Coherence of one element sampled on an increasing time grid."""

    taus: np.ndarray
    gamma: np.ndarray
    theta_phase: np.ndarray
    lambda_phase: np.ndarray
    source: str = "closed-form"
    magnitude: np.ndarray = field(init=False)
    phase: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.taus = np.asarray(self.taus, dtype=float)
        if self.taus.ndim != 1:
            raise ValueError("Trace times must be one-dimensional")
        if np.any(np.diff(self.taus) <= 0):
            raise ValueError("Trace times must be strictly increasing")
        self.gamma = np.broadcast_to(np.asarray(self.gamma, dtype=float), self.taus.shape).copy()
        self.theta_phase = np.broadcast_to(np.asarray(self.theta_phase, dtype=float), self.taus.shape).copy()
        self.lambda_phase = np.broadcast_to(np.asarray(self.lambda_phase, dtype=float), self.taus.shape).copy()
        if np.any(self.gamma < -NEGATIVE_GAMMA_TOLERANCE):
            raise ValueError("Damping exponents must be >= 0")
        # roundoff below zero
        self.gamma = np.maximum(self.gamma, 0.0)
        self.magnitude = np.exp(-self.gamma)
        self.phase = self.theta_phase - self.lambda_phase

    @classmethod
    def from_functions(cls, taus, functions: list[DecoherenceFunctions], source: str) -> "CoherenceTrace":
        return cls(
            taus,
            [f.gamma for f in functions],
            [f.theta_phase for f in functions],
            [f.lambda_phase for f in functions],
            source,
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                schema.TAU: self.taus,
                schema.GAMMA: self.gamma,
                schema.THETA_PHASE: self.theta_phase,
                schema.LAMBDA_PHASE: self.lambda_phase,
                schema.MAGNITUDE: self.magnitude,
                schema.PHASE: self.phase,
            },
            columns=schema.TRACE_COLUMNS,
        )


def scan_grid(lo: float, hi: float, extra=()) -> np.ndarray:
    """Log-spaced grid on [lo, hi] with POINTS_PER_DECADE density, plus extra points inside."""
    decades = max(np.log10(hi / lo), 0.0)
    grid = np.geomspace(lo, hi, int(np.ceil(decades * POINTS_PER_DECADE)) + 1)
    extra = np.asarray([t for t in extra if lo < t < hi], dtype=float)
    return np.union1d(grid, extra)


def _first_crossing(evaluator: Evaluator, level: float, grid: np.ndarray) -> tuple[float | None, np.ndarray]:
    mags = np.asarray(evaluator(grid), dtype=float)
    below = np.nonzero(mags <= level)[0]
    if not below.size:
        return None, mags
    k = below[0]
    if k == 0:
        return float(grid[0]), mags

    def shifted(t: float) -> float:
        return float(np.asarray(evaluator(np.array([t])))[0]) - level

    root = brentq(shifted, grid[k - 1], grid[k], rtol=ROOT_RTOL, xtol=1e-15)
    return float(root), mags


def find_tau_dec(
    evaluator: Evaluator,
    bracket: tuple[float, float] | None = None,
    horizon: float = HORIZON,
    seeds=(),
) -> float | None:
    """
    First time the magnitude reaches TAU_DEC_LEVEL, or None if it never does before horizon.

    A bracket that does not contain the crossing is widened to [SCAN_START, horizon].
    """
    if bracket is not None:
        lo, hi = bracket
        root, _ = _first_crossing(evaluator, TAU_DEC_LEVEL, scan_grid(lo, hi, seeds))
        if root is not None and root > lo:
            return root
        logger.debug("No 0.98 crossing in [%g, %g]; widening to horizon", lo, hi)
    root, _ = _first_crossing(evaluator, TAU_DEC_LEVEL, scan_grid(SCAN_START, horizon, seeds))
    return root


def find_t_f(
    evaluator: Evaluator,
    horizon: float = HORIZON,
    limit: float | None = None,
    seeds=(),
) -> float | Saturates:
    """
    First time the magnitude reaches T_F_LEVEL, else Saturates.

    Args:
        evaluator: Vectorised magnitude as a function of tau.
        horizon: End of the regular scan.
        limit: Analytic tau -> infinity limit of the damping exponent, if known
            (inf when it diverges). A limit below the level extends the scan
            past the horizon.
        seeds: Extra scan points (e.g. transit times where the curve bends).
    """
    root, mags = _first_crossing(evaluator, T_F_LEVEL, scan_grid(SCAN_START, horizon, seeds))
    if root is not None:
        return root
    if limit is not None and np.exp(-limit) <= T_F_LEVEL:
        lo = horizon
        while lo < MAX_HORIZON:
            hi = min(lo * 10.0, MAX_HORIZON)
            logger.info("Extending t_f scan to [%.3g, %.3g]", lo, hi)
            root, mags = _first_crossing(evaluator, T_F_LEVEL, scan_grid(lo, hi))
            if root is not None:
                return root
            lo = hi
        logger.warning("Limit says 0.01 is reached but no crossing found below %.3g", MAX_HORIZON)
        return Saturates(float(mags[-1]))
    if limit is not None:
        return Saturates(float(np.exp(-limit)))
    logger.info("No analytic limit; residual taken from the plateau at tau=%.3g", horizon)
    return Saturates(float(mags[-1]))


def detect_recoherence(trace) -> bool:
    """
    True when the magnitude drops and later rises again by more than the noise guard.

    Accepts a CoherenceTrace or an array of magnitudes.
    """
    m = np.asarray(trace.magnitude if isinstance(trace, CoherenceTrace) else trace, dtype=float)
    if m.size < 3:
        return False
    drop = np.maximum.accumulate(m) - m
    rise = np.maximum.accumulate(m[::-1])[::-1] - m
    revived = (drop > 0) & (rise > RISE_ABS) & (rise > RISE_REL * drop)
    return bool(np.any(revived))


def recoherence_grid(horizon: float = HORIZON, extra=()) -> np.ndarray:
    return scan_grid(1e-3, horizon, extra)


def decoherence_times(
    evaluator: Evaluator,
    limit: float | None = None,
    seeds=(),
    horizon: float = HORIZON,
) -> DecoherenceTimes:
    """tau_dec, t_f, residual and recoherence flag of one coherence."""
    tau_dec = find_tau_dec(evaluator, horizon=horizon, seeds=seeds)
    t_f = find_t_f(evaluator, horizon=horizon, limit=limit, seeds=seeds)
    residual = t_f.residual if isinstance(t_f, Saturates) else T_F_LEVEL
    grid = recoherence_grid(horizon, seeds)
    recoherence = detect_recoherence(np.asarray(evaluator(grid)))
    return DecoherenceTimes(tau_dec, t_f, recoherence, residual)


# -- evaluators for the closed forms -----------------------------------------


def single_evaluator(d: int, c: float, theta: float, fluctuations: str = "total") -> Evaluator:
    def evaluate(taus):
        return np.exp(-np.asarray(gamma_closed(d, c, theta, np.asarray(taus, dtype=float), fluctuations)))

    return evaluate


def pair_evaluator(
    d: int,
    c: float,
    theta: float,
    tau_s: float,
    case: PairCase,
    branch: PairBranch,
    coupling: str = "independent",
) -> Evaluator:
    """Magnitude of a two-qubit coherence from the closed forms."""
    if coupling == "collective":

        def collective(taus):
            taus = np.atleast_1d(np.asarray(taus, dtype=float))
            return np.array([pair_collective(c, d, theta, t, case, branch).magnitude for t in taus])

        return collective
    if coupling != "independent":
        raise ValueError(f"coupling must be one of {COUPLINGS}, got {coupling!r}")
    if case is PairCase.ONE_DIFFERS:
        return single_evaluator(d, c, theta)

    def evaluate(taus):
        taus = np.asarray(taus, dtype=float)
        return np.exp(-np.asarray(pair_both_differ_exponent(d, c, theta, taus, tau_s, branch)))

    return evaluate


def quiet_seed(c: float) -> float:
    """Quiet-regime estimate of tau_dec."""
    return float(np.sqrt(2.0 * QUIET_EXPONENT / c))


def single_times(d: int, c: float, theta: float) -> DecoherenceTimes:
    return decoherence_times(
        single_evaluator(d, c, theta),
        limit=gamma_limit(d, c, theta),
        seeds=(quiet_seed(c),),
    )


def pair_times(
    d: int,
    c: float,
    theta: float,
    tau_s: float,
    case: PairCase,
    branch: PairBranch,
    coupling: str = "independent",
) -> DecoherenceTimes:
    if coupling == "collective":
        limit = pair_collective_limit(d, c, theta, case, branch)
    else:
        limit = pair_limit(d, c, theta, tau_s, case, branch)
    seeds = (quiet_seed(c), tau_s) if tau_s > 0 else (quiet_seed(c),)
    return decoherence_times(pair_evaluator(d, c, theta, tau_s, case, branch, coupling), limit, seeds)


# -- traces ---------------------------------------------------------------------


def register_functions(
    bath: BathSpec,
    geometry: RegisterGeometry,
    label: CoherenceLabel,
    tau: float,
    coupling: str = "independent",
    method: str = "closed",
    config: QuadratureConfig = DEFAULT_CONFIG,
    fluctuations: str = "total",
) -> DecoherenceFunctions:
    if coupling == "independent":
        return independent_functions(bath, geometry, label, tau, method, config, fluctuations)
    if coupling == "collective":
        return collective_functions(bath, label, tau, method, config, fluctuations)
    raise ValueError(f"coupling must be one of {COUPLINGS}, got {coupling!r}")


def register_trace(
    bath: BathSpec,
    geometry: RegisterGeometry,
    label: CoherenceLabel,
    taus,
    coupling: str = "independent",
    method: str = "closed",
    config: QuadratureConfig = DEFAULT_CONFIG,
    fluctuations: str = "total",
    progress: bool = False,
) -> CoherenceTrace:
    """Gamma, Theta, Lambda and the coherence factor of one element on a time grid."""
    if method == "closed" and not bath.has_closed_form:
        raise ValueError(f"closed form unavailable for d={bath.d}; use --method quadrature")
    taus = np.asarray(taus, dtype=float)
    functions = [
        register_functions(bath, geometry, label, t, coupling, method, config, fluctuations)
        for t in tqdm(taus, desc=str(label), disable=not progress)
    ]
    source = "closed-form" if method == "closed" else "quadrature"
    return CoherenceTrace.from_functions(taus, functions, source)


def single_trace(bath: BathSpec, taus, method: str = "closed", config: QuadratureConfig = DEFAULT_CONFIG, fluctuations: str = "total") -> CoherenceTrace:
    """Trace of the single-qubit coherence (1,0)."""
    return register_trace(
        bath, RegisterGeometry.collective(1), CoherenceLabel.from_bits("1", "0"), taus,
        method=method, config=config, fluctuations=fluctuations,
    )


PAIR_ELEMENTS = {
    (PairCase.BOTH_DIFFER, PairBranch.PLUS): "10,10",
    (PairCase.BOTH_DIFFER, PairBranch.MINUS): "10,01",
    (PairCase.ONE_DIFFERS, PairBranch.PLUS): "00,01",
    (PairCase.ONE_DIFFERS, PairBranch.MINUS): "00,10",
}


def pair_label(case: PairCase, branch: PairBranch) -> CoherenceLabel:
    """Representative two-qubit element of a case and branch."""
    return CoherenceLabel.from_element(PAIR_ELEMENTS[(case, branch)])


def pair_trace(
    bath: BathSpec,
    tau_s: float,
    case: PairCase,
    branch: PairBranch,
    taus,
    coupling: str = "independent",
    method: str = "closed",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> CoherenceTrace:
    """
    Two-qubit coherence trace.

    The closed method evaluates the pair formulas directly (phase = Theta only);
    quadrature assembles the representative element, which includes Lambda.
    """
    if coupling not in COUPLINGS:
        raise ValueError(f"coupling must be one of {COUPLINGS}, got {coupling!r}")
    if tau_s < 0:
        raise ValueError(f"Transit time must be >= 0, got tau_s={tau_s!r}")
    if method != "closed":
        geometry = RegisterGeometry.from_positions([0.0, tau_s])
        return register_trace(bath, geometry, pair_label(case, branch), taus, coupling, method, config)
    if not bath.has_closed_form:
        raise ValueError(f"closed form unavailable for d={bath.d}; use --method quadrature")
    d, c, theta = bath.d, bath.c, bath.theta
    taus = np.asarray(taus, dtype=float)
    single = np.asarray(gamma_closed(d, c, theta, taus))
    if coupling == "collective":
        if case is PairCase.ONE_DIFFERS:
            gamma, phase = single, branch.sign * np.asarray(theta_closed(d, c, taus))
        else:
            gamma, phase = (4.0 * single if branch is PairBranch.PLUS else np.zeros_like(taus)), 0.0
    elif case is PairCase.ONE_DIFFERS:
        gamma, phase = single, pair_one_differs_phase(d, c, taus, tau_s, branch)
    else:
        gamma, phase = pair_both_differ_exponent(d, c, theta, taus, tau_s, branch), 0.0
    return CoherenceTrace(taus, gamma, phase, 0.0, "closed-form")


def register_evaluator(
    bath: BathSpec,
    geometry: RegisterGeometry,
    label: CoherenceLabel,
    coupling: str = "independent",
    method: str = "closed",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> Evaluator:
    """Magnitude of any register element, for decoherence_times."""

    def evaluate(taus):
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        gammas = [register_functions(bath, geometry, label, t, coupling, method, config).gamma for t in taus]
        return np.exp(-np.asarray(gammas))

    return evaluate


def register_limit(bath: BathSpec, geometry: RegisterGeometry, label: CoherenceLabel, coupling: str = "independent") -> float | None:
    """
    tau -> infinity limit of the damping exponent, when the closed forms give one.

    Known for one qubit, for two-qubit elements and for collective coupling.
    """
    if not bath.has_closed_form or label.is_diagonal:
        return 0.0 if label.is_diagonal else None
    d, c, theta = bath.d, bath.c, bath.theta
    if coupling == "collective":
        weight = dfs_classify(label).damping_weight
        return 0.0 if weight == 0 else weight * gamma_limit(d, c, theta)
    delta = label.i - label.j
    active = np.nonzero(delta)[0]
    if active.size == 1:
        return gamma_limit(d, c, theta)
    if active.size == 2:
        m, n = active
        branch = PairBranch.PLUS if delta[m] == delta[n] else PairBranch.MINUS
        return pair_limit(d, c, theta, float(geometry.transit[m, n]), PairCase.BOTH_DIFFER, branch)
    return None


def register_times(
    bath: BathSpec,
    geometry: RegisterGeometry,
    label: CoherenceLabel,
    coupling: str = "independent",
    method: str = "closed",
    config: QuadratureConfig = DEFAULT_CONFIG,
    horizon: float = HORIZON,
) -> DecoherenceTimes:
    """tau_dec and t_f of a register element through the assembled functions."""
    seeds = [quiet_seed(bath.c)]
    if geometry.size > 1:
        seeds += [t for t in np.unique(geometry.transit) if t > 0]
    return decoherence_times(
        register_evaluator(bath, geometry, label, coupling, method, config),
        register_limit(bath, geometry, label, coupling),
        seeds,
        horizon,
    )


# -- tables -------------------------------------------------------------------


def _time_cell(times: DecoherenceTimes, which: str) -> float:
    if which == "tau_dec":
        return np.nan if times.tau_dec is None else times.tau_dec
    if which == "t_f":
        return np.nan if times.saturates else times.t_f
    return times.residual


def _deviation(computed: float, printed: str) -> float:
    expected = published.parse_cell(printed)
    if expected is None:
        return 0.0 if np.isnan(computed) else np.inf
    if np.isnan(computed):
        return np.inf
    return abs(computed - expected) / abs(expected)


def _table_rows(table_id: int):
    if table_id == 1:
        for c, theta, ts, *printed in published.TABLE_1:
            params = {schema.COUPLING: c, schema.THETA: theta, schema.TAU_S: ts}

            def cells(c=c, theta=theta, ts=ts):
                out = {}
                for branch in (PairBranch.MINUS, PairBranch.PLUS):
                    t = pair_times(1, c, theta, ts, PairCase.BOTH_DIFFER, branch)
                    out[f"tau_dec_{branch.value}"] = _time_cell(t, "tau_dec")
                    out[f"t_f_{branch.value}"] = _time_cell(t, "t_f")
                return out

            yield params, cells, printed
    elif table_id == 2:
        for c, theta, ts, *printed in published.TABLE_2:
            params = {schema.COUPLING: c, schema.THETA: theta, schema.TAU_S: ts}

            def cells(c=c, theta=theta, ts=ts):
                out = {}
                for branch in (PairBranch.PLUS, PairBranch.MINUS):
                    t = pair_times(3, c, theta, ts, PairCase.BOTH_DIFFER, branch)
                    for which in ("tau_dec", "t_f", "residual"):
                        out[f"{which}_{branch.value}"] = _time_cell(t, which)
                return out

            yield params, cells, printed
    elif table_id == 3:
        for d, c, theta, *printed in published.TABLE_3:
            params = {schema.DIMENSION: d, schema.COUPLING: c, schema.THETA: theta}

            def cells(d=d, c=c, theta=theta):
                t = single_times(d, c, theta)
                return {which: _time_cell(t, which) for which in ("tau_dec", "t_f", "residual")}

            yield params, cells, printed
    else:
        raise ValueError(f"Unknown table {table_id}; choose 1, 2 or 3")


def quadrature_deviation(table_id: int, params: dict, computed: dict, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """
    Largest relative deviation of the Ohmic closed-form exponent from quadrature
    at the finite crossing times of one table row; NaN for super-Ohmic rows.
    """
    d = params.get(schema.DIMENSION, 1)
    if table_id not in schema.QUADRATURE_TABLES or d != 1:
        return np.nan
    c, theta = params[schema.COUPLING], params[schema.THETA]
    bath = BathSpec(1, c, theta)
    primitives = QuadraturePrimitives(bath, config)
    deviations = []
    if table_id == 3:
        for name in ("tau_dec", "t_f"):
            t = computed[name]
            if np.isfinite(t):
                closed = gamma_closed(1, c, theta, t)
                deviations.append(abs(primitives.gamma(t) - closed) / closed)
    else:
        ts = params[schema.TAU_S]
        geometry = RegisterGeometry.from_positions([0.0, ts])
        for branch in (PairBranch.MINUS, PairBranch.PLUS):
            label = pair_label(PairCase.BOTH_DIFFER, branch)
            for name in (f"tau_dec_{branch.value}", f"t_f_{branch.value}"):
                t = computed[name]
                if np.isfinite(t):
                    closed = pair_both_differ_exponent(1, c, theta, t, ts, branch)
                    quad = independent_functions(bath, geometry, label, t, "quadrature", config).gamma
                    deviations.append(abs(quad - closed) / closed)
    return max(deviations, default=np.nan)


def make_table(table_id: int, progress: bool = False, quadrature: bool = True) -> pd.DataFrame:
    """
    Recompute a published table from the closed forms.

    Returns one row per printed row: parameters, computed cells (NaN marks a
    saturation sentinel), the printed cells, relative deviations, a match
    flag, notes on known printed discrepancies and an error annotation for
    cells that failed to evaluate. Ohmic tables also carry the quadrature
    deviation of the exponent unless quadrature is False.
    """
    if table_id not in published.TABLES:
        raise ValueError(f"Unknown table {table_id}; choose 1, 2 or 3")
    names = schema.TABLE_CELLS[table_id]
    rows = []
    for params, cells, printed in tqdm(
        list(_table_rows(table_id)), desc=f"table {table_id}", disable=not progress
    ):
        row = dict(params)
        error = ""
        try:
            computed = cells()
        except (RuntimeError, ValueError, ArithmeticError) as e:
            logger.error("Table %d row %s failed: %s", table_id, params, e)
            computed = {name: np.nan for name in names}
            error = str(e)
        match = not error
        notes = []
        for name, text in zip(names, printed):
            value = computed[name]
            deviation = _deviation(value, text)
            row[name] = value
            row[schema.PRINTED_PREFIX + name] = published.parse_cell(text)
            row[schema.DEVIATION_PREFIX + name] = deviation
            reason = published.discrepancy(table_id, tuple(params.values()), name)
            if reason is not None:
                notes.append(f"{name}: {reason}")
                continue
            match &= deviation <= published.cell_tolerance(table_id, text)
        if table_id in schema.QUADRATURE_TABLES:
            deviation = np.nan
            if quadrature and not error:
                try:
                    deviation = quadrature_deviation(table_id, params, computed)
                except RuntimeError as e:
                    logger.warning("Quadrature check of table %d row %s failed: %s", table_id, params, e)
            row[schema.QUADRATURE_DEVIATION] = deviation
        row[schema.MATCH] = bool(match)
        row[schema.NOTE] = "; ".join(notes)
        row[schema.ERROR] = error
        rows.append(row)
    frame = pd.DataFrame(rows, columns=schema.table_columns(table_id))
    logger.info("Table %d: %d/%d rows match", table_id, int(frame[schema.MATCH].sum()), len(frame))
    if schema.QUADRATURE_DEVIATION in frame and frame[schema.QUADRATURE_DEVIATION].notna().any():
        worst = frame[schema.QUADRATURE_DEVIATION].idxmax()
        logger.info(
            "Table %d: largest Ohmic closed-form vs quadrature deviation %.3g (theta=%g)",
            table_id,
            frame.at[worst, schema.QUADRATURE_DEVIATION],
            frame.at[worst, schema.THETA],
        )
    return frame


# -- figures ------------------------------------------------------------------

FIGURE_IDS = tuple(range(1, 9))
FIGURE_THETAS = (1e-3, 1.0, 1e2)
PANEL_NAMES = ("i", "ii", "iii", "iv")
SURFACE_TMAX = 10.0


def _figure_rows(figure: int, panel: str, d: int, c: float, theta, taus, tau_s, branch: str, component: str, magnitude, thermal_time=np.nan) -> pd.DataFrame:
    taus = np.asarray(taus, dtype=float)
    return pd.DataFrame(
        {
            schema.FIGURE: figure,
            schema.PANEL: panel,
            schema.DIMENSION: d,
            schema.COUPLING: c,
            schema.THETA: theta,
            schema.TAU: taus,
            schema.TAU_S: tau_s,
            schema.THERMAL_TIME: thermal_time,
            schema.BRANCH: branch,
            schema.COMPONENT: component,
            schema.MAGNITUDE: np.asarray(magnitude, dtype=float),
        },
        columns=schema.FIGURE_COLUMNS,
    )


def _pair_surface(figure: int, d: int, c: float, panels, points: int) -> list[pd.DataFrame]:
    taus = np.linspace(0.0, SURFACE_TMAX, points)
    frames = []
    for panel, theta, branch in panels:
        for ts in np.linspace(0.0, SURFACE_TMAX, points):
            exponent = pair_both_differ_exponent(d, c, theta, taus, ts, branch)
            frames.append(
                _figure_rows(figure, panel, d, c, theta, taus, ts, branch.value, "total", np.exp(-exponent))
            )
    return frames


def _single_surface(figure: int, panel: str, d: int, c: float, points: int, collective_factor: float = 1.0, branch: str = "") -> list[pd.DataFrame]:
    taus = np.linspace(0.0, SURFACE_TMAX, points)
    frames = []
    for theta in np.logspace(-5, 2, points):
        exponent = collective_factor * np.asarray(gamma_closed(d, c, theta, taus))
        frames.append(_figure_rows(figure, panel, d, c, theta, taus, np.nan, branch, "total", np.exp(-exponent)))
    return frames


def _fluctuation_curves(figure: int, panel: str, theta: float, taus, config: QuadratureConfig, thermal_time=None) -> list[pd.DataFrame]:
    bath = BathSpec(1, 0.25, theta)
    primitives = QuadraturePrimitives(bath, config)
    vacuum = np.array([primitives.gamma(t, "vacuum") for t in taus])
    thermal = np.array([primitives.gamma(t, "thermal") for t in taus])
    # total = vacuum + thermal, so the total curve is the product of the components
    components = {"total": vacuum + thermal, "vacuum": vacuum, "thermal": thermal}
    frames = []
    for name, exponent in components.items():
        frames.append(
            _figure_rows(
                figure, panel, 1, 0.25, theta, taus, np.nan, "", name, np.exp(-exponent),
                np.nan if thermal_time is None else thermal_time,
            )
        )
    return frames


def make_figure(figure_id: int, points: int = 41, config: QuadratureConfig = DEFAULT_CONFIG, progress: bool = False) -> pd.DataFrame:
    """
    Grid data behind one published figure, in long format (schema.FIGURE_COLUMNS).

    Pair and single-qubit surfaces come from the closed forms on tau, tau_s or
    theta grids; the Ohmic fluctuation curves integrate the vacuum and thermal
    parts separately.
    """
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"Unknown figure {figure_id}; choose 1..8")
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    frames: list[pd.DataFrame] = []
    if figure_id in (1, 2, 3, 4):
        d = 1 if figure_id in (1, 2) else 3
        branch = PairBranch.PLUS if figure_id in (1, 3) else PairBranch.MINUS
        panels = [(PANEL_NAMES[k], theta, branch) for k, theta in enumerate(FIGURE_THETAS)]
        frames = _pair_surface(figure_id, d, 0.25, panels, points)
    elif figure_id == 5:
        panels = [
            ("i", 1e-3, PairBranch.PLUS),
            ("ii", 1e2, PairBranch.PLUS),
            ("iii", 1e-3, PairBranch.MINUS),
            ("iv", 1e2, PairBranch.MINUS),
        ]
        frames = _pair_surface(5, 3, 0.01, panels, points)
    elif figure_id == 6:
        # collective, both qubits differ, plus branch: exp(-4 Gamma_d)
        frames = _single_surface(6, "i", 1, 0.25, points, 4.0, PairBranch.PLUS.value)
        frames += _single_surface(6, "ii", 3, 0.25, points, 4.0, PairBranch.PLUS.value)
    elif figure_id == 7:
        taus = np.concatenate([[0.0], np.geomspace(1e-2, 1e7, points)])
        jobs = [("i." + p, theta, taus, None) for p, theta in zip("abc", (1.0, 1e-2, 1e-5))]
        thermal_times = np.concatenate([[0.0], np.geomspace(1e-3, 1e2, points)])
        jobs += [("ii." + p, theta, thermal_times / theta, thermal_times) for p, theta in zip("abc", (1e-5, 1e-2, 1e2))]
        for panel, theta, grid, thermal_time in tqdm(jobs, desc="figure 7", disable=not progress):
            frames += _fluctuation_curves(7, panel, theta, grid, config, thermal_time)
    else:
        frames = _single_surface(8, "i", 1, 0.25, points)
        frames += _single_surface(8, "ii", 3, 0.25, points)
    return pd.concat(frames, ignore_index=True)
