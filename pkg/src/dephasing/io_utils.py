"""
Output and input helpers for the CLI.

Outputs go to a local path (written atomically) or to stdout for None / "-".
Inputs: config files (JSON or YAML), label files, geometry files and modes files.
"""

import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
import yaml

import schema
from register import CoherenceLabel, ModeSet, RegisterGeometry

STDOUT = "-"
FORMATS = ("csv", "parquet")
FLOAT_FORMAT = "%.10g"


def is_stdout(path: str | Path | None) -> bool:
    return path is None or str(path).strip() == STDOUT


def write_output(content: bytes | str, output_path: str | Path | None) -> None:
    """
    Write content to output_path, or stdout when the path is None or "-".

    Local files are written to a temp file in the same directory and renamed
    into place, so an interrupted run never leaves a partial file.
    """
    if isinstance(content, str):
        content = content.encode("utf-8")
    if is_stdout(output_path):
        sys.stdout.buffer.write(content)
        sys.stdout.flush()
        return
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(content)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def frame_to_csv(frame: pd.DataFrame, na_rep: str = schema.SATURATES) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep=na_rep, lineterminator="\n")


def blank_missing(frame: pd.DataFrame, columns) -> pd.DataFrame:
    """Copy of frame with NaN in the given columns written as empty cells instead of the sentinel."""
    out = frame.copy()
    for column in columns:
        if column in out:
            out[column] = out[column].astype(object).where(out[column].notna(), "")
    return out


def frame_to_parquet(frame: pd.DataFrame) -> bytes:
    buffer = io.BytesIO()
    frame.to_parquet(buffer, index=False, engine="pyarrow")
    return buffer.getvalue()


def write_frame(frame: pd.DataFrame, output_path: str | Path | None, fmt: str = "csv", na_rep: str = schema.SATURATES) -> None:
    """Write a DataFrame as CSV (fixed float formatting) or Parquet."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    if fmt == "parquet":
        if is_stdout(output_path):
            raise ValueError("Parquet output needs --out <path>")
        write_output(frame_to_parquet(frame), output_path)
    else:
        write_output(frame_to_csv(frame, na_rep), output_path)


def write_json(data: dict, output_path: str | Path | None) -> None:
    write_output(json.dumps(data, indent=2, sort_keys=True) + "\n", output_path)


def read_frame(path: str | Path) -> pd.DataFrame:
    """Read a CSV written by write_frame (saturation sentinels become NaN) or a Parquet file."""
    path = Path(path)
    if path.suffix == ".parquet":
        return pd.read_parquet(path, engine="pyarrow")
    return pd.read_csv(path, na_values=[schema.SATURATES], keep_default_na=False)


def load_config(path: str | Path) -> dict:
    """
    Load a flat mapping of flag names to values from JSON or YAML.

    Keys may use dashes or underscores; they are returned with underscores.

    Raises:
        ValueError: If the file is not a mapping or cannot be parsed.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ValueError(f"Cannot parse config file {str(path)!r}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"Config file {str(path)!r} must contain a mapping, got {type(data).__name__}")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def read_labels_file(path: str | Path) -> list[CoherenceLabel]:
    """
    One label per line as "ibits,jbits" (e.g. 111,000); blank lines and # comments are skipped.
    """
    labels = []
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            labels.append(CoherenceLabel.parse(line))
        except ValueError as e:
            raise ValueError(f"{path}:{n}: {e}") from e
    if not labels:
        raise ValueError(f"No labels in {path}")
    return labels


def read_geometry_file(path: str | Path) -> RegisterGeometry:
    """
    JSON or YAML with either "positions" (collinear, propagation order) or a full "transit" matrix.
    """
    data = load_config(path)
    if "positions" in data:
        return RegisterGeometry.from_positions(data["positions"])
    if "transit" in data:
        return RegisterGeometry(np.asarray(data["transit"], dtype=float))
    raise ValueError(f"Geometry file {path} needs 'positions' or 'transit'")


def modes_frame(modes: ModeSet) -> pd.DataFrame:
    columns = {schema.MODE_X: modes.x, schema.MODE_WEIGHT: modes.weights}
    for n in range(modes.qubits):
        columns[f"{schema.MODE_PHASE_PREFIX}{n + 1}"] = modes.phases[:, n]
    return pd.DataFrame(columns)


def write_modes_file(modes: ModeSet, output_path: str | Path | None) -> None:
    """Modes file: one mode per line, x,weight,phase_1,...,phase_L."""
    frame = modes_frame(modes)
    write_output(frame.to_csv(index=False, float_format="%.17g", lineterminator="\n"), output_path)


def read_modes_file(path: str | Path) -> ModeSet:
    frame = pd.read_csv(path)
    phase_columns = [c for c in frame.columns if c.startswith(schema.MODE_PHASE_PREFIX)]
    missing = {schema.MODE_X, schema.MODE_WEIGHT} - set(frame.columns)
    if missing or not phase_columns:
        raise ValueError(f"Modes file {path} needs columns x, weight and phase_1..phase_L")
    phase_columns.sort(key=lambda c: int(c[len(schema.MODE_PHASE_PREFIX) :]))
    return ModeSet(
        frame[schema.MODE_X].to_numpy(dtype=float),
        frame[schema.MODE_WEIGHT].to_numpy(dtype=float),
        frame[phase_columns].to_numpy(dtype=float),
    )
