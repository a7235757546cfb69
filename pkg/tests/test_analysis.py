"""Tests for decoherence times, recoherence detection, tables and figure grids."""

import numpy as np
import pandas as pd
import pytest

import analysis
import published
import schema
from analysis import (
    CoherenceTrace,
    DecoherenceTimes,
    Saturates,
    detect_recoherence,
    find_t_f,
    find_tau_dec,
    make_figure,
    make_table,
    pair_times,
    single_times,
)
from bath import BathSpec
from closedform import PairBranch, PairCase, gamma_closed, gamma_limit, pair_limit
from register import CoherenceLabel, RegisterGeometry


def _exponential(rate: float):
    def evaluate(taus):
        return np.exp(-rate * np.asarray(taus, dtype=float))

    return evaluate


class TestCrossings:
    """tau_dec and t_f root finding."""

    def test_exponential_decay(self):
        times = analysis.decoherence_times(_exponential(2.0), limit=np.inf)
        assert times.tau_dec == pytest.approx(-np.log(0.98) / 2.0, rel=1e-7)
        assert times.t_f == pytest.approx(np.log(100.0) / 2.0, rel=1e-7)
        assert times.t_decay == pytest.approx(times.t_f - times.tau_dec)
        assert not times.recoherence

    def test_bracket_is_widened(self):
        assert find_tau_dec(_exponential(1.0), bracket=(10.0, 20.0)) == pytest.approx(-np.log(0.98), rel=1e-7)

    def test_never_reaching_tau_dec(self):
        assert find_tau_dec(lambda t: np.full(np.shape(t), 0.99)) is None

    def test_saturation_uses_analytic_limit(self):
        def evaluate(taus):
            return 0.5 + 0.5 * np.exp(-np.asarray(taus))

        t_f = find_t_f(evaluate, limit=np.log(2.0))
        assert isinstance(t_f, Saturates)
        assert t_f.residual == pytest.approx(0.5)

    def test_saturation_without_limit_uses_plateau(self):
        t_f = find_t_f(lambda t: 0.3 + 0.7 * np.exp(-np.asarray(t)))
        assert t_f == Saturates(pytest.approx(0.3))

    def test_extends_past_horizon(self):
        rate = 4.605170185988091 / 3e7
        t_f = find_t_f(_exponential(rate), horizon=1e7, limit=np.inf)
        assert t_f == pytest.approx(3e7, rel=1e-6)

    def test_times_validation(self):
        with pytest.raises(ValueError):
            DecoherenceTimes(5.0, 1.0, False, 0.01)

    def test_to_dict_marks_saturation(self):
        d = DecoherenceTimes(0.5, Saturates(0.7), False, 0.7).to_dict()
        assert d["t_f"] == schema.SATURATES
        assert d["saturates"] and d["t_decay"] is None


def _saturating_pair_cells():
    for c, theta, ts, *printed in published.TABLE_2:
        for branch, t_f in ((PairBranch.PLUS, printed[1]), (PairBranch.MINUS, printed[4])):
            if t_f != published.SATURATES:
                continue
            if published.discrepancy(2, (c, theta, ts), f"t_f_{branch.value}") is None:
                yield pytest.param(c, theta, ts, branch, id=f"c{c}-th{theta}-ts{ts}-{branch.value}")


def _saturating_single_rows():
    for d, c, theta, _, t_f, _ in published.TABLE_3:
        if t_f == published.SATURATES:
            yield pytest.param(d, c, theta, id=f"d{d}-c{c}-th{theta}")


class TestPlateauAgainstLimits:
    """Residuals read off the plateau agree with the analytic tau -> infinity limits."""

    @pytest.mark.parametrize("c, theta, ts, branch", list(_saturating_pair_cells()))
    def test_pair_plateau(self, c, theta, ts, branch):
        evaluate = analysis.pair_evaluator(3, c, theta, ts, PairCase.BOTH_DIFFER, branch)
        t_f = find_t_f(evaluate, limit=None, seeds=(analysis.quiet_seed(c), ts))
        assert isinstance(t_f, Saturates)
        expected = np.exp(-pair_limit(3, c, theta, ts, PairCase.BOTH_DIFFER, branch))
        assert t_f.residual == pytest.approx(expected, abs=1e-4)

    @pytest.mark.parametrize("d, c, theta", list(_saturating_single_rows()))
    def test_single_plateau(self, d, c, theta):
        t_f = find_t_f(analysis.single_evaluator(d, c, theta), limit=None)
        assert isinstance(t_f, Saturates)
        assert t_f.residual == pytest.approx(np.exp(-gamma_limit(d, c, theta)), abs=1e-4)


class TestRecoherence:
    """Non-monotone coherence traces."""

    def test_monotone_is_not_flagged(self):
        assert not detect_recoherence(np.exp(-np.linspace(0.0, 5.0, 50)))

    def test_revival_is_flagged(self):
        assert detect_recoherence(np.array([1.0, 0.8, 0.6, 0.7, 0.75]))

    def test_noise_is_ignored(self):
        assert not detect_recoherence(np.array([1.0, 0.5, 0.5 + 1e-9, 0.4]))

    def test_super_ohmic_plus_branch_recoheres(self):
        times = pair_times(3, 0.25, 1e-3, 0.5, PairCase.BOTH_DIFFER, PairBranch.PLUS)
        assert times.recoherence

    def test_weak_coupling_high_temperature_recoheres(self):
        times = pair_times(3, 0.01, 1e2, 0.5, PairCase.BOTH_DIFFER, PairBranch.MINUS)
        assert times.recoherence

    def test_ohmic_single_qubit_is_monotone(self):
        assert not single_times(1, 0.25, 1.0).recoherence


class TestCoherenceTrace:
    def test_frame_columns(self):
        trace = analysis.single_trace(BathSpec(3, 0.25, 1e-5), np.linspace(0.0, 100.0, 11))
        frame = trace.to_frame()
        assert list(frame.columns) == schema.TRACE_COLUMNS
        assert frame[schema.MAGNITUDE].iloc[0] == 1.0
        assert frame[schema.MAGNITUDE].iloc[-1] == pytest.approx(0.7788, abs=1e-4)

    def test_rejects_unsorted_times(self):
        with pytest.raises(ValueError):
            CoherenceTrace(np.array([0.0, 2.0, 1.0]), 0.0, 0.0, 0.0)

    def test_rejects_negative_exponent(self):
        with pytest.raises(ValueError):
            CoherenceTrace(np.array([0.0, 1.0]), np.array([0.0, -1.0]), 0.0, 0.0)

    def test_closed_form_unavailable(self):
        with pytest.raises(ValueError, match="closed form unavailable"):
            analysis.single_trace(BathSpec(2, 0.25, 1.0), [0.0, 1.0])

    def test_general_dimension_by_quadrature(self):
        trace = analysis.single_trace(BathSpec(2, 0.25, 1.0), [0.0, 1.0, 2.0], method="quadrature")
        assert trace.source == "quadrature"
        assert np.all(np.diff(trace.magnitude) < 0)

    def test_pair_collective_minus_is_constant(self):
        taus = np.linspace(0.0, 10.0, 21)
        trace = analysis.pair_trace(BathSpec(1, 0.25, 1e-3), 0.5, PairCase.BOTH_DIFFER, PairBranch.MINUS, taus, "collective")
        np.testing.assert_array_equal(trace.magnitude, 1.0)

    def test_pair_closed_matches_quadrature(self):
        bath = BathSpec(3, 0.25, 1.0)
        taus = np.array([0.0, 0.7, 2.0])
        closed = analysis.pair_trace(bath, 0.5, PairCase.BOTH_DIFFER, PairBranch.PLUS, taus)
        quad = analysis.pair_trace(bath, 0.5, PairCase.BOTH_DIFFER, PairBranch.PLUS, taus, method="quadrature")
        np.testing.assert_allclose(quad.gamma, closed.gamma, atol=1e-6)

    def test_register_trace_collective_superdecoherence(self):
        bath = BathSpec(3, 0.25, 1.0)
        label = CoherenceLabel.from_bits("111", "000")
        taus = np.array([0.0, 1.0, 3.0])
        trace = analysis.register_trace(bath, RegisterGeometry.collective(3), label, taus, "collective")
        np.testing.assert_allclose(trace.gamma, 9.0 * gamma_closed(3, 0.25, 1.0, taus), rtol=1e-12)

    def test_register_times_match_pair_times(self):
        bath = BathSpec(1, 0.25, 1.0)
        geometry = RegisterGeometry.from_positions([0.0, 0.5])
        label = analysis.pair_label(PairCase.BOTH_DIFFER, PairBranch.PLUS)
        via_register = analysis.register_times(bath, geometry, label)
        via_pair = pair_times(1, 0.25, 1.0, 0.5, PairCase.BOTH_DIFFER, PairBranch.PLUS)
        assert via_register.tau_dec == pytest.approx(via_pair.tau_dec, rel=1e-7)
        assert via_register.t_f == pytest.approx(via_pair.t_f, rel=1e-7)


class TestPublishedValues:
    """Single rows of the published tables."""

    @pytest.mark.parametrize("row", published.TABLE_3, ids=lambda r: f"d{r[0]}-c{r[1]}-th{r[2]}")
    def test_single_qubit_rows(self, row):
        d, c, theta, tau_dec, t_f, residual = row
        times = single_times(d, c, theta)
        assert times.tau_dec == pytest.approx(float(tau_dec), rel=published.cell_tolerance(3, tau_dec))
        if t_f == published.SATURATES:
            assert times.saturates
            assert times.residual == pytest.approx(float(residual), rel=published.cell_tolerance(3, residual))
        else:
            assert times.t_f == pytest.approx(float(t_f), rel=published.cell_tolerance(3, t_f))

    @pytest.mark.parametrize("branch", [PairBranch.PLUS, PairBranch.MINUS])
    def test_overshoot_row_reports_first_crossing(self, branch):
        """The printed 9.7767 is where the coherence climbs back above 0.98."""
        times = pair_times(3, 0.01, 1e-3, 1e2, PairCase.BOTH_DIFFER, branch)
        assert times.tau_dec == pytest.approx(1.0209, rel=1e-3)
        assert times.saturates
        assert times.residual == pytest.approx(0.9802, abs=1e-4)
        evaluate = analysis.pair_evaluator(3, 0.01, 1e-3, 1e2, PairCase.BOTH_DIFFER, branch)
        dip, printed = evaluate(np.array([np.sqrt(3.0), 9.7767]))
        assert dip < 0.98
        assert printed == pytest.approx(0.98, abs=1e-5)
        assert published.discrepancy(2, (0.01, 1e-3, 1e2), f"tau_dec_{branch.value}")

    def test_transient_dip_below_t_f_level(self):
        """Minus dips under 0.01 near tau = tau_s, then settles at its limit above it."""
        times = pair_times(3, 0.01, 1e2, 1e2, PairCase.BOTH_DIFFER, PairBranch.MINUS)
        assert times.t_f == pytest.approx(98.48, rel=1e-3)
        assert times.residual == analysis.T_F_LEVEL
        evaluate = analysis.pair_evaluator(3, 0.01, 1e2, 1e2, PairCase.BOTH_DIFFER, PairBranch.MINUS)
        assert evaluate(np.array([1e2]))[0] < 0.01
        limit = pair_limit(3, 0.01, 1e2, 1e2, PairCase.BOTH_DIFFER, PairBranch.MINUS)
        assert np.exp(-limit) == pytest.approx(0.01832, abs=1e-5)
        assert evaluate(np.array([1e4]))[0] == pytest.approx(np.exp(-limit), abs=1e-6)
        for cell in ("t_f_minus", "residual_minus"):
            assert published.discrepancy(2, (0.01, 1e2, 1e2), cell)
        plus = pair_times(3, 0.01, 1e2, 1e2, PairCase.BOTH_DIFFER, PairBranch.PLUS)
        assert plus.saturates

    def test_ohmic_pair_first_row(self):
        plus = pair_times(1, 0.25, 1e-3, 0.5, PairCase.BOTH_DIFFER, PairBranch.PLUS)
        minus = pair_times(1, 0.25, 1e-3, 0.5, PairCase.BOTH_DIFFER, PairBranch.MINUS)
        assert plus.tau_dec == pytest.approx(0.235446, rel=1e-3)
        assert plus.t_f == pytest.approx(103.507, rel=1e-3)
        assert minus.tau_dec == pytest.approx(0.436919, rel=1e-3)
        assert minus.saturates


class TestTables:
    """Full table reproduction."""

    def test_table_3(self):
        frame = make_table(3)
        assert len(frame) == 13
        assert frame[schema.MATCH].all(), frame.loc[~frame[schema.MATCH]].to_string()
        assert (frame[schema.ERROR] == "").all()
        assert (frame[schema.NOTE] == "").all()
        deviations = frame[[schema.DEVIATION_PREFIX + c for c in ("tau_dec", "t_f")]].to_numpy()
        assert np.all(deviations <= 1e-3)

    def test_table_3_reports_ohmic_quadrature_deviation(self):
        frame = make_table(3)
        ohmic = frame[schema.DIMENSION] == 1
        reported = frame.loc[ohmic, schema.QUADRATURE_DEVIATION]
        assert reported.notna().all() and (reported >= 0).all()
        assert frame.loc[~ohmic, schema.QUADRATURE_DEVIATION].isna().all()

    def test_quadrature_column_can_be_skipped(self):
        frame = make_table(3, quadrature=False)
        assert frame[schema.QUADRATURE_DEVIATION].isna().all()
        assert frame[schema.MATCH].all()

    @pytest.mark.slow
    @pytest.mark.parametrize("table_id", [1, 2])
    def test_pair_tables(self, table_id):
        frame = make_table(table_id)
        assert len(frame) == len(published.TABLES[table_id])
        assert frame[schema.MATCH].all(), frame.loc[~frame[schema.MATCH]].to_string()

    @pytest.mark.slow
    def test_super_ohmic_pair_table_notes(self):
        frame = make_table(2)
        noted = frame.index[frame[schema.NOTE] != ""].tolist()
        assert noted == [6, 7]
        assert frame.loc[6, "tau_dec_plus"] == pytest.approx(1.0209, rel=1e-3)
        assert frame.loc[6, schema.DEVIATION_PREFIX + "tau_dec_plus"] > 0.5
        assert frame.loc[7, "t_f_minus"] == pytest.approx(98.48, rel=1e-3)
        assert np.isinf(frame.loc[7, schema.DEVIATION_PREFIX + "t_f_minus"])
        assert "t_f_minus" in frame.loc[7, schema.NOTE]

    @pytest.mark.slow
    def test_ohmic_pair_table_quadrature_deviation(self):
        frame = make_table(1)
        assert frame[schema.QUADRATURE_DEVIATION].notna().all()

    def test_unknown_table(self):
        with pytest.raises(ValueError):
            make_table(9)

    def test_columns(self):
        frame = make_table(3, quadrature=False)
        cells = schema.TABLE_CELLS[3]
        expected = (
            schema.TABLE_PARAMETERS[3]
            + cells
            + [schema.PRINTED_PREFIX + c for c in cells]
            + [schema.DEVIATION_PREFIX + c for c in cells]
            + [schema.QUADRATURE_DEVIATION, schema.MATCH, schema.NOTE, schema.ERROR]
        )
        assert list(frame.columns) == expected
        assert schema.QUADRATURE_DEVIATION not in schema.table_columns(2)


class TestFigures:
    """Figure grids: layout and the tau = 0 endpoint."""

    @pytest.mark.parametrize("figure_id", [1, 2, 3, 4, 5, 6, 8])
    def test_closed_form_figures_start_at_full_coherence(self, figure_id):
        frame = make_figure(figure_id, points=5)
        assert list(frame.columns) == schema.FIGURE_COLUMNS
        at_zero = frame.loc[frame[schema.TAU] == 0.0, schema.MAGNITUDE]
        assert len(at_zero) and np.all(at_zero == 1.0)
        assert frame[schema.MAGNITUDE].between(0.0, 1.0).all()

    def test_figure_5_panels(self):
        frame = make_figure(5, points=3)
        assert sorted(frame[schema.PANEL].unique()) == ["i", "ii", "iii", "iv"]

    @pytest.mark.slow
    def test_figure_7_fluctuation_components(self):
        frame = make_figure(7, points=6)
        assert set(frame[schema.COMPONENT]) == {"total", "vacuum", "thermal"}
        wide = frame.pivot_table(
            index=[schema.PANEL, schema.TAU], columns=schema.COMPONENT, values=schema.MAGNITUDE
        )
        np.testing.assert_allclose(wide["total"], wide["vacuum"] * wide["thermal"], rtol=1e-12)
        assert (frame.loc[frame[schema.TAU] == 0.0, schema.MAGNITUDE] == 1.0).all()

    def test_unknown_figure(self):
        with pytest.raises(ValueError):
            make_figure(9)

    def test_grid_size(self):
        frame = make_figure(6, points=4)
        assert isinstance(frame, pd.DataFrame)
        assert len(frame) == 2 * 4 * 4
