"""
Column names for every tabular output.

Used by cli (writing), analysis (frames) and the verify subcommand (reading).
"""

# Coherence trace (single, pair, register)
TAU = "tau"
GAMMA = "gamma"
THETA_PHASE = "theta_phase"
LAMBDA_PHASE = "lambda_phase"
MAGNITUDE = "magnitude"
PHASE = "phase"

TRACE_COLUMNS = [TAU, GAMMA, THETA_PHASE, LAMBDA_PHASE, MAGNITUDE, PHASE]

# Register traces carry the label in front
LABEL = "label"
REGISTER_COLUMNS = [LABEL] + TRACE_COLUMNS

# Figure grids (long format)
FIGURE = "figure"
PANEL = "panel"
DIMENSION = "d"
COUPLING = "c"
THETA = "theta"
TAU_S = "tau_s"
THERMAL_TIME = "thermal_time"
BRANCH = "branch"
COMPONENT = "component"

FIGURE_COLUMNS = [
    FIGURE,
    PANEL,
    DIMENSION,
    COUPLING,
    THETA,
    TAU,
    TAU_S,
    THERMAL_TIME,
    BRANCH,
    COMPONENT,
    MAGNITUDE,
]

# Tables: parameter columns, then computed cells, then printed_<cell> and rel_dev_<cell>
PRINTED_PREFIX = "printed_"
DEVIATION_PREFIX = "rel_dev_"
MATCH = "match"
ERROR = "error"
# Known differences between a printed cell and the recomputed one
NOTE = "note"

# Ohmic rows: largest relative deviation of the low-temperature exponent from
# quadrature at the row's finite crossing times
QUADRATURE_DEVIATION = "quad_rel_dev_gamma"
QUADRATURE_TABLES = (1, 3)

TABLE_PARAMETERS = {
    1: [COUPLING, THETA, TAU_S],
    2: [COUPLING, THETA, TAU_S],
    3: [DIMENSION, COUPLING, THETA],
}

TABLE_CELLS = {
    1: ["tau_dec_minus", "t_f_minus", "tau_dec_plus", "t_f_plus"],
    2: [
        "tau_dec_plus",
        "t_f_plus",
        "residual_plus",
        "tau_dec_minus",
        "t_f_minus",
        "residual_minus",
    ],
    3: ["tau_dec", "t_f", "residual"],
}


def table_columns(table_id: int) -> list[str]:
    """Column order of a recomputed table."""
    cells = TABLE_CELLS[table_id]
    columns = (
        TABLE_PARAMETERS[table_id]
        + cells
        + [PRINTED_PREFIX + c for c in cells]
        + [DEVIATION_PREFIX + c for c in cells]
    )
    if table_id in QUADRATURE_TABLES:
        columns.append(QUADRATURE_DEVIATION)
    return columns + [MATCH, NOTE, ERROR]

# Cells printed as "saturates" when no crossing exists
SATURATES = "saturates"

# Modes file: x_k, weight, phase_1 ... phase_L
MODE_X = "x"
MODE_WEIGHT = "weight"
MODE_PHASE_PREFIX = "phase_"
