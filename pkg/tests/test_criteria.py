"""Shape criteria, their margins, and verdict aggregation."""

import numpy as np
import pytest

from gensanity.checks import Curve, build_catalog
from gensanity.criteria import (
    Bell,
    CRITERIA_TABLE,
    Converging,
    DESIDERATA,
    DESIDERATUM_TITLES,
    HighToLow,
    HighToLowWithDrop,
    Horizontal,
    LowToHigh,
    MetricCriteria,
    PointClose,
    ROW_DESIDERATA,
    Verdict,
    criteria_for,
    eval_shape,
    evaluate_all,
    evaluate_row,
    quantile_index,
)
from gensanity.metrics import METRIC_IDS

LIN13 = np.linspace(-6.0, 6.0, 13)


def bell_curve(depth=1.0):
    return depth * np.exp(-0.5 * (LIN13 / 2.0) ** 2)


class TestShapes:
    def test_bell_margins(self):
        ys = np.array([0.0, 0.3, 1.0, 0.4, 0.0])
        res = eval_shape(np.linspace(-2, 2, 5), ys, Bell(0.0))
        assert res.passed
        assert [round(b.margin, 6) for b in res.bullets] == [0.8, 0.8, 0.1, 0.1]

    def test_bell_fails_off_peak(self):
        # maximum sits away from the declared peak position
        ys = np.array([0.0, 1.0, 0.5, 0.2, 0.0])
        res = eval_shape(np.linspace(-2, 2, 5), ys, Bell(0.0))
        assert not res.passed
        assert res.margin == pytest.approx(-0.4)

    def test_bell_requires_rise_on_both_sides(self):
        ys = np.array([0.9, 0.95, 1.0, 0.5, 0.0])
        res = eval_shape(np.linspace(-2, 2, 5), ys, Bell(0.0))
        assert not res.passed
        failed = [b.description for b in res.bullets if not b.passed]
        assert failed == ["left-to-peak rise"]

    def test_ramps(self):
        xs = np.linspace(0, 1, 5)
        up = np.array([0.0, 0.2, 0.5, 0.9, 1.0])
        assert eval_shape(xs, up, LowToHigh()).passed
        assert not eval_shape(xs, up, HighToLow()).passed
        assert eval_shape(xs, up[::-1], HighToLow()).passed
        sagging = np.array([1.0, 0.2, 0.1, 0.15, 0.95])
        assert not eval_shape(xs, sagging, LowToHigh()).passed

    def test_high_to_low_with_drop_bullet(self):
        xs = np.arange(10.0)
        slow = np.array([1.0, 1.0, 1.0, 1.0, 1.0, 0.98, 0.8, 0.5, 0.2, 0.0])
        plain = eval_shape(xs, slow, HighToLow())
        assert plain.passed
        dropped = eval_shape(xs, slow, HighToLowWithDrop(0.5))
        assert not dropped.passed
        assert dropped.bullets[-1].description == "fallen by index 5"
        assert dropped.bullets[-1].margin == pytest.approx(0.02 - 0.1)
        fast = np.array([1.0, 0.8, 0.6, 0.5, 0.4, 0.35, 0.2, 0.1, 0.05, 0.0])
        assert eval_shape(xs, fast, HighToLowWithDrop(0.5)).passed

    def test_horizontal_spread(self):
        xs = np.linspace(0, 1, 3)
        assert eval_shape(xs, [0.50, 0.52, 0.51], Horizontal()).passed
        assert not eval_shape(xs, [0.50, 0.60, 0.55], Horizontal()).passed
        assert eval_shape(xs, [0.50, 0.60, 0.55], Horizontal(spread=0.2)).passed

    def test_converging_ignores_head(self):
        xs = np.linspace(0, 1, 9)
        ys = np.array([0.9, 0.5, 0.2, 0.1, 0.30, 0.31, 0.29, 0.30, 0.30])
        assert eval_shape(xs, ys, Converging(0.5)).passed
        assert not eval_shape(xs, ys, Converging(0.25)).passed

    def test_point_close_margins(self):
        xs = np.linspace(0, 1, 5)
        ys = np.array([0.951, 0.5, 0.2, 0.1, 0.0])
        assert eval_shape(xs, ys, PointClose(("left",), 1.0)).passed
        res = eval_shape(xs, ys, PointClose(("left",), 1.0, tol=0.04))
        assert not res.passed
        assert res.margin == pytest.approx(0.04 - 0.049)
        assert eval_shape(xs, ys, PointClose(("right",), 0.0)).passed
        assert eval_shape(xs, ys, PointClose(("x", 0.5), 0.2)).passed

    def test_position_resolution_on_log_grid(self):
        xs = np.logspace(-3, 3, 13)
        ys = np.zeros(13)
        ys[12] = 1.0
        # 600 sits between grid points 316 and 1000: past the geometric
        # midpoint (562) but short of the arithmetic one (658)
        assert eval_shape(xs, ys, PointClose(("x", 600.0), 1.0), log_x=True).passed
        assert not eval_shape(xs, ys, PointClose(("x", 600.0), 1.0), log_x=False).passed
        ys6 = np.zeros(13)
        ys6[6] = 1.0
        assert eval_shape(xs, ys6, PointClose(("x", 1.0), 1.0), log_x=True).passed

    def test_quantile_positions(self):
        assert quantile_index(5, 0.5) == 2
        assert quantile_index(10, 0.5) == 5
        assert quantile_index(10, 0.95) == 9
        assert quantile_index(13, 0.0) == 0
        assert quantile_index(13, 1.0) == 12

    def test_rejects_tiny_grids_and_unknown_positions(self):
        with pytest.raises(ValueError, match="3 grid points"):
            eval_shape([0.0, 1.0], [0.0, 1.0], Horizontal())
        with pytest.raises(ValueError, match="unknown position"):
            eval_shape(LIN13, np.zeros(13), PointClose(("middle",), 1.0))


class TestMetricCriteria:
    def test_single_or_dual_exclusively(self):
        MetricCriteria(single=(Horizontal(),))
        MetricCriteria(high=(LowToHigh(),), low=(Bell(1.0),))
        with pytest.raises(ValueError):
            MetricCriteria(single=(Horizontal(),), high=(LowToHigh(),), low=(Bell(1.0),))
        with pytest.raises(ValueError):
            MetricCriteria()
        with pytest.raises(ValueError):
            MetricCriteria(high=(LowToHigh(),))


class TestCriteriaTable:
    def test_size_and_coverage(self):
        assert len(CRITERIA_TABLE) == 60
        assert len(ROW_DESIDERATA) == 15
        for row, ds in ROW_DESIDERATA.items():
            assert len(ds) == 2
            for d in ds:
                assert d in DESIDERATA and d in DESIDERATUM_TITLES
                assert (row, d, "fidelity") in CRITERIA_TABLE
                assert (row, d, "diversity") in CRITERIA_TABLE

    def test_size_sweeps_use_their_own_desiderata(self):
        assert ROW_DESIDERATA["hypercube_varying_sample_size"] == ("purpose", "data_size")
        assert ROW_DESIDERATA["hypercube_varying_syn_size"] == ("purpose", "syn_size")
        assert ROW_DESIDERATA["scaling_one_dimension"] == ("bounds", "invariance")

    def test_per_variant_entries_resolve(self):
        a = criteria_for("discrete_vs_continuous", "bounds", "fidelity", "discrete_real")
        b = criteria_for("discrete_vs_continuous", "bounds", "fidelity", "continuous_real")
        assert a != b
        # non-variant entries ignore the variant name
        c = criteria_for("gaussian_mean_difference", "purpose", "fidelity", "d1")
        d = criteria_for("gaussian_mean_difference", "purpose", "fidelity", "d64")
        assert c == d
        assert c.single == (Bell(0.0),)


def make_curve(values, variant="d1", row="gaussian_mean_difference",
               metric="iprec", xs=LIN13, log_x=False, error=None):
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = np.vstack([values, values])
    return Curve("check", variant, row, metric, np.asarray(xs, float),
                 values, log_x, error)


class TestEvaluateRow:
    def test_missing_and_errored_curves(self):
        v = evaluate_row("gaussian_mean_difference", "purpose", "iprec", [])
        assert (v.letter, v.detail) == ("F", "no curves produced")
        bad = make_curve(np.zeros(13), error="x=0, repeat 1: boom")
        v = evaluate_row("gaussian_mean_difference", "purpose", "iprec",
                         [make_curve(bell_curve()), bad])
        assert v.letter == "E"
        assert v.detail == "d1: x=0, repeat 1: boom"

    def test_single_needs_every_variant(self):
        good = make_curve(bell_curve(), variant="d1")
        flat = make_curve(np.full(13, 0.5), variant="d8")
        v = evaluate_row("gaussian_mean_difference", "purpose", "iprec", [good])
        assert v.letter == "T"
        assert v.variant_results["d1"]["single"][0]["passed"] is True
        v = evaluate_row("gaussian_mean_difference", "purpose", "iprec", [good, flat])
        assert v.letter == "F"
        assert v.variant_results["d8"]["single"][0]["passed"] is False

    def test_dual_sides_must_agree_across_variants(self):
        xs = np.logspace(-3, 3, 13)
        rising = make_curve(np.linspace(0, 1, 13), variant="d1",
                            row="gaussian_std_difference", metric="irec",
                            xs=xs, log_x=True)
        peaked = make_curve(bell_curve(), variant="d8",
                            row="gaussian_std_difference", metric="irec",
                            xs=xs, log_x=True)
        high = evaluate_row("gaussian_std_difference", "purpose", "irec", [rising])
        assert high.letter == "H"
        low = evaluate_row("gaussian_std_difference", "purpose", "irec", [peaked])
        assert low.letter == "L"
        mixed = evaluate_row("gaussian_std_difference", "purpose", "irec",
                             [rising, peaked])
        assert mixed.letter == "F"

    def test_dual_tie_breaks_high(self):
        # the shipped table never allows both sides at once, so exercise the
        # combiner on an injected row
        key = ("fake_row", "purpose", "diversity")
        CRITERIA_TABLE[key] = MetricCriteria(
            high=(Horizontal(spread=0.5),), low=(Horizontal(spread=0.9),)
        )
        try:
            flat = make_curve(np.full(13, 0.5), row="fake_row", metric="irec")
            v = evaluate_row("fake_row", "purpose", "irec", [flat])
            assert v.letter == "H"
            assert set(v.variant_results["d1"]) == {"high", "low"}
        finally:
            del CRITERIA_TABLE[key]

    def test_fidelity_metrics_never_read_dual(self):
        v = evaluate_row("gaussian_mean_difference", "purpose", "density",
                         [make_curve(bell_curve(), metric="density")])
        assert v.letter == "T"

    def test_margins_are_rounded_for_reporting(self):
        v = evaluate_row("gaussian_mean_difference", "purpose", "iprec",
                         [make_curve(bell_curve())])
        (entry,) = v.variant_results["d1"]["single"]
        assert entry["criterion"] == "Bell"
        assert entry["margin"] == round(entry["margin"], 6)
        assert {b["check"] for b in entry["bullets"]} >= {"left-to-peak rise"}


class TestEvaluateAll:
    def test_covers_every_cell_even_without_curves(self):
        catalog = build_catalog()
        verdicts = evaluate_all(list(catalog), [], METRIC_IDS)
        assert len(verdicts) == 15 * 2 * len(METRIC_IDS)
        assert {v.letter for v in verdicts} == {"F"}
        keys = {(v.row, v.desideratum, v.metric) for v in verdicts}
        assert len(keys) == len(verdicts)

    def test_curves_route_to_their_row(self):
        catalog = [s for s in build_catalog() if s.check == "gaussian_mean_difference"]
        curves = [make_curve(bell_curve(0.8), variant=v) for v in ("d1", "d8", "d64")]
        verdicts = evaluate_all(catalog, curves, ("iprec",))
        by_d = {v.desideratum: v for v in verdicts}
        assert by_d["purpose"].letter == "T"
        # a 0.8-deep bell keeps the shape but misses the value-1 bound at x=0
        assert by_d["bounds"].letter == "F"

    def test_verdict_is_plain_data(self):
        v = Verdict("row", "purpose", "iprec", "T")
        assert (v.detail, v.variant_results) == ("", {})
