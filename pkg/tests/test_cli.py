"""Tests for the command-line front end: outputs, config files, exit codes and verify."""

import json
import logging

import numpy as np
import pandas as pd
import pytest

import cli
import io_utils
import log_setup
import schema
from bath import BathSpec
from register import sample_modes


@pytest.fixture(autouse=True)
def _drop_cli_log_handler():
    """main() installs a stderr handler on the root logger; remove it after each test."""
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if isinstance(h, log_setup._ProgressAwareHandler)]:
        root.removeHandler(handler)
    root.setLevel(logging.WARNING)


def _run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = cli.main([*argv, "--out", str(out)])
    return code, out


class TestSingle:
    def test_super_ohmic_trace(self, tmp_path):
        code, out = _run(tmp_path, "single", "--d", "3", "--c", "0.25", "--theta", "1e-5", "--tmax", "100")
        assert code == cli.EXIT_OK
        frame = pd.read_csv(out)
        assert list(frame.columns) == schema.TRACE_COLUMNS
        assert frame[schema.MAGNITUDE].iloc[-1] == pytest.approx(0.7788, abs=1e-4)

    def test_zero_duration(self, tmp_path):
        code, out = _run(tmp_path, "single", "--tmax", "0")
        frame = pd.read_csv(out)
        assert code == cli.EXIT_OK
        assert len(frame) == 1 and frame[schema.MAGNITUDE].iloc[0] == 1.0

    def test_unsupported_dimension(self, tmp_path, capsys):
        code, out = _run(tmp_path, "single", "--d", "2")
        assert code == cli.EXIT_INVALID
        assert "closed form unavailable; use --method quadrature" in capsys.readouterr().err
        assert not out.exists()

    def test_quadrature_general_dimension(self, tmp_path):
        code, out = _run(tmp_path, "single", "--d", "2", "--method", "quadrature", "--tmax", "2", "--points", "5")
        assert code == cli.EXIT_OK
        assert len(pd.read_csv(out)) == 5

    def test_times_summary(self, tmp_path):
        times = tmp_path / "times.json"
        code, _ = _run(tmp_path, "single", "--d", "3", "--c", "0.25", "--theta", "1e-5", "--times-out", str(times))
        data = json.loads(times.read_text())
        assert code == cli.EXIT_OK
        assert data["tau_dec"] == pytest.approx(0.167969, rel=1e-3)
        assert data["t_f"] == schema.SATURATES
        assert data["residual"] == pytest.approx(0.778801, rel=1e-5)

    def test_output_is_deterministic(self, tmp_path):
        _, first = _run(tmp_path, "single", "--d", "3", name="a.csv")
        _, second = _run(tmp_path, "single", "--d", "3", name="b.csv")
        assert first.read_bytes() == second.read_bytes()


class TestPair:
    def test_collective_minus_is_constant(self, tmp_path):
        code, out = _run(tmp_path, "pair", "--coupling", "collective", "--case", "both-differ", "--branch", "minus")
        assert code == cli.EXIT_OK
        assert (pd.read_csv(out)[schema.MAGNITUDE] == 1.0).all()

    def test_ohmic_plus_crossing(self, tmp_path):
        times = tmp_path / "times.json"
        code, _ = _run(
            tmp_path, "pair", "--coupling", "independent", "--d", "1", "--c", "0.25", "--theta", "1e-3",
            "--ts", "0.5", "--branch", "plus", "--times-out", str(times),
        )
        data = json.loads(times.read_text())
        assert code == cli.EXIT_OK
        assert data["tau_dec"] == pytest.approx(0.235446, rel=1e-3)
        assert data["t_f"] == pytest.approx(103.507, rel=1e-3)

    def test_branches_agree_at_large_transit(self, tmp_path):
        _, plus = _run(tmp_path, "pair", "--branch", "plus", "--ts", "1e4", name="plus.csv")
        _, minus = _run(tmp_path, "pair", "--branch", "minus", "--ts", "1e4", name="minus.csv")
        np.testing.assert_allclose(
            pd.read_csv(plus)[schema.MAGNITUDE], pd.read_csv(minus)[schema.MAGNITUDE], atol=1e-6
        )


class TestRegister:
    def test_superdecoherence_label(self, tmp_path):
        summary = tmp_path / "summary.json"
        code, out = _run(
            tmp_path, "register", "--label", "111,000", "--coupling", "collective", "--d", "3",
            "--method", "closed", "--tmax", "2", "--points", "3", "--summary-out", str(summary),
        )
        assert code == cli.EXIT_OK
        frame = pd.read_csv(out, dtype={schema.LABEL: str})
        assert list(frame.columns) == schema.REGISTER_COLUMNS
        data = json.loads(summary.read_text())
        assert data["labels"]["111,000"]["damping_weight"] == 9.0
        assert data["f_of_L"] == 9.0

    def test_diagonal_label_is_constant(self, tmp_path):
        code, out = _run(tmp_path, "register", "--label", "101,101", "--ts", "0.5", "--method", "closed", "--points", "5")
        assert code == cli.EXIT_OK
        assert (pd.read_csv(out)[schema.MAGNITUDE] == 1.0).all()

    def test_labels_and_geometry_files(self, tmp_path):
        labels = tmp_path / "labels.txt"
        labels.write_text("# two-qubit elements\n10,01\n11,00\n")
        geometry = tmp_path / "geometry.yaml"
        geometry.write_text("positions: [0.0, 0.5]\n")
        code, out = _run(
            tmp_path, "register", "--labels-file", str(labels), "--geometry-file", str(geometry),
            "--method", "closed", "--points", "4",
        )
        assert code == cli.EXIT_OK
        assert len(pd.read_csv(out)) == 8

    def test_oracle_matches_quadrature(self, tmp_path):
        modes = tmp_path / "modes.csv"
        io_utils.write_modes_file(sample_modes(BathSpec(3, 0.25, 1.0), [0.0, 0.5], 100_000), modes)
        common = ["register", "--element", "10,10", "--d", "3", "--theta", "1", "--positions", "0", "0.5", "--tmax", "3", "--points", "4"]
        _, oracle = _run(tmp_path, *common, "--method", "oracle", "--modes-file", str(modes), name="oracle.csv")
        _, quad = _run(tmp_path, *common, "--method", "quadrature", name="quad.csv")
        np.testing.assert_allclose(
            pd.read_csv(oracle)[schema.MAGNITUDE], pd.read_csv(quad)[schema.MAGNITUDE], atol=1e-3
        )

    def test_oracle_needs_modes_file(self, tmp_path):
        code, _ = _run(tmp_path, "register", "--label", "10,01", "--method", "oracle")
        assert code == cli.EXIT_INVALID

    def test_mixed_sizes_rejected(self, tmp_path):
        code, _ = _run(tmp_path, "register", "--label", "10,01", "--label", "1,0")
        assert code == cli.EXIT_INVALID


class TestModes:
    def test_modes_file(self, tmp_path):
        code, out = _run(tmp_path, "modes", "--d", "3", "--theta", "1", "--positions", "0", "0.5", "--n-modes", "200")
        assert code == cli.EXIT_OK
        modes = io_utils.read_modes_file(out)
        assert modes.size == 200 and modes.qubits == 2
        assert modes.x[-1] < 60.0

    def test_zero_modes(self, tmp_path, capsys):
        code, out = _run(tmp_path, "modes", "--n-modes", "0")
        assert code == cli.EXIT_OK
        assert io_utils.read_modes_file(out).size == 0
        assert "Sampled 0 modes on [0, 60]" in capsys.readouterr().err

    def test_explicit_upper_is_logged(self, tmp_path, capsys):
        code, _ = _run(tmp_path, "modes", "--n-modes", "0", "--upper", "12.5")
        assert code == cli.EXIT_OK
        assert "[0, 12.5]" in capsys.readouterr().err


class TestTableAndFigure:
    def test_table_3(self, tmp_path):
        code, out = _run(tmp_path, "table", "3")
        frame = io_utils.read_frame(out)
        assert code == cli.EXIT_OK
        assert len(frame) == 13
        assert frame[schema.MATCH].all()

    def test_unknown_table(self, tmp_path):
        code, out = _run(tmp_path, "table", "9")
        assert code == cli.EXIT_INVALID
        assert not out.exists()

    def test_figure_parquet(self, tmp_path):
        pytest.importorskip("pyarrow")
        code, out = _run(tmp_path, "figure", "6", "--points", "3", "--format", "parquet", name="fig6.parquet")
        assert code == cli.EXIT_OK
        frame = pd.read_parquet(out)
        assert list(frame.columns) == schema.FIGURE_COLUMNS

    def test_unknown_figure(self, tmp_path):
        code, _ = _run(tmp_path, "figure", "0")
        assert code == cli.EXIT_INVALID


class TestConfig:
    def test_config_file_sets_defaults(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"d": 3, "theta": "1e-5", "tmax": 100, "points": 11}))
        code, out = _run(tmp_path, "single", "--config", str(config))
        frame = pd.read_csv(out)
        assert code == cli.EXIT_OK
        assert len(frame) == 11
        assert frame[schema.MAGNITUDE].iloc[-1] == pytest.approx(0.7788, abs=1e-4)

    def test_flags_win_over_config(self, tmp_path):
        config = tmp_path / "run.yaml"
        config.write_text("points: 11\ntmax: 5\n")
        code, out = _run(tmp_path, "single", "--config", str(config), "--points", "3")
        frame = pd.read_csv(out)
        assert code == cli.EXIT_OK
        assert len(frame) == 3
        assert frame[schema.TAU].iloc[-1] == 5.0

    def test_unknown_key(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"temperature": 1.0}))
        code, _ = _run(tmp_path, "single", "--config", str(config))
        assert code == cli.EXIT_INVALID

    def test_invalid_choice(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"method": "exact"}))
        code, _ = _run(tmp_path, "single", "--config", str(config))
        assert code == cli.EXIT_INVALID


class TestVerify:
    def test_trace_round_trip(self, tmp_path):
        _, out = _run(tmp_path, "register", "--label", "10,01", "--label", "11,00", "--method", "closed")
        assert cli.main(["verify", str(out)]) == cli.EXIT_OK

    def test_table_round_trip(self, tmp_path):
        _, out = _run(tmp_path, "table", "3")
        assert cli.main(["verify", str(out)]) == cli.EXIT_OK

    def test_tampered_trace_fails(self, tmp_path):
        _, out = _run(tmp_path, "single", "--d", "3")
        frame = pd.read_csv(out)
        frame.loc[3, schema.MAGNITUDE] = 0.5
        frame.to_csv(out, index=False)
        assert cli.main(["verify", str(out)]) == cli.EXIT_INVALID

    def test_tampered_table_fails(self, tmp_path):
        _, out = _run(tmp_path, "table", "3")
        frame = io_utils.read_frame(out)
        frame.loc[0, "tau_dec"] *= 1.01
        io_utils.write_frame(frame, out)
        assert cli.main(["verify", str(out)]) == cli.EXIT_INVALID

    def test_figure_round_trip(self, tmp_path):
        _, out = _run(tmp_path, "figure", "6", "--points", "3")
        assert cli.main(["verify", str(out)]) == cli.EXIT_OK

    def test_figure_parquet_round_trip(self, tmp_path):
        pytest.importorskip("pyarrow")
        _, out = _run(tmp_path, "figure", "8", "--points", "3", "--format", "parquet", name="fig8.parquet")
        assert cli.main(["verify", str(out)]) == cli.EXIT_OK

    def test_figure_not_starting_at_full_coherence_fails(self, tmp_path):
        _, out = _run(tmp_path, "figure", "6", "--points", "3")
        frame = io_utils.read_frame(out)
        frame.loc[frame[schema.TAU] == 0.0, schema.MAGNITUDE] = 0.9
        frame.to_csv(out, index=False)
        assert cli.main(["verify", str(out)]) == cli.EXIT_INVALID

    def test_figure_magnitude_above_one_fails(self, tmp_path):
        _, out = _run(tmp_path, "figure", "6", "--points", "3")
        frame = io_utils.read_frame(out)
        frame.loc[len(frame) - 1, schema.MAGNITUDE] = 1.5
        frame.to_csv(out, index=False)
        assert cli.main(["verify", str(out)]) == cli.EXIT_INVALID

    def test_fluctuation_split_is_checked(self, tmp_path):
        rows = []
        for component, magnitude in (("total", 0.5), ("vacuum", 0.8), ("thermal", 0.7)):
            for tau, value in ((0.0, 1.0), (1.0, magnitude)):
                rows.append([7, "i.a", 1, 0.25, 1.0, tau, np.nan, np.nan, "", component, value])
        path = tmp_path / "fig7.csv"
        io_utils.write_frame(pd.DataFrame(rows, columns=schema.FIGURE_COLUMNS), path, na_rep="")
        assert cli.main(["verify", str(path)]) == cli.EXIT_INVALID
        frame = io_utils.read_frame(path)
        frame.loc[(frame[schema.COMPONENT] == "total") & (frame[schema.TAU] == 1.0), schema.MAGNITUDE] = 0.56
        frame.to_csv(path, index=False)
        assert cli.main(["verify", str(path)]) == cli.EXIT_OK

    def test_unrecognised_file(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n")
        assert cli.main(["verify", str(path)]) == cli.EXIT_INVALID
