import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airkit import (
    CalibrationTable,
    load_calibration,
    predict_post_fec,
    threshold_check,
)

HEADER = "metric_kind normalized-GMI\ncode_rate 0.80\n"


def _table(points=((0.80, 1e-2), (0.90, 1e-4)), kind="normalized-GMI", rate=0.80):
    return CalibrationTable(kind, rate, tuple(points))


def test_load_calibration_valid():
    table = load_calibration(io.StringIO(HEADER + "0.80 1e-2\n0.90 1e-4\n"))
    assert table.metric_kind == "normalized-GMI"
    assert table.code_rate == 0.80
    assert table.points == ((0.80, 1e-2), (0.90, 1e-4))


def test_load_calibration_headers_anywhere():
    text = "# comment\n0.80 1e-2\nmetric_kind normalized-MI\n0.90 1e-4\ncode_rate 0.75\n"
    table = load_calibration(io.StringIO(text))
    assert table.metric_kind == "normalized-MI"
    assert table.code_rate == 0.75


def test_load_calibration_errors():
    with pytest.raises(ValueError, match="metric_kind"):
        load_calibration(io.StringIO("code_rate 0.8\n0.8 1e-2\n0.9 1e-4\n"))
    with pytest.raises(ValueError, match="code_rate"):
        load_calibration(io.StringIO("metric_kind normalized-MI\n0.8 1e-2\n0.9 1e-4\n"))
    with pytest.raises(ValueError, match="strictly decrease"):
        load_calibration(io.StringIO(HEADER + "0.80 1e-4\n0.90 1e-2\n"))
    with pytest.raises(ValueError, match="strictly increase"):
        load_calibration(io.StringIO(HEADER + "0.90 1e-2\n0.80 1e-4\n"))
    with pytest.raises(ValueError, match="at least 2"):
        load_calibration(io.StringIO(HEADER + "0.80 1e-2\n"))
    with pytest.raises(ValueError, match=r"outside \(0, 1\]"):
        load_calibration(io.StringIO(HEADER + "0.80 1e-2\n0.90 0.0\n"))
    with pytest.raises(ValueError, match=r"outside \[0, 1\]"):
        load_calibration(io.StringIO(HEADER + "0.80 1e-2\n1.90 1e-4\n"))
    with pytest.raises(ValueError, match="line 3"):
        load_calibration(io.StringIO(HEADER + "0.80 abc\n"))


def test_table_validation():
    with pytest.raises(ValueError, match="metric_kind"):
        _table(kind="MI")
    with pytest.raises(ValueError, match="code_rate"):
        _table(rate=1.5)


def test_knot_recovery_exact():
    table = _table()
    assert predict_post_fec(table, 0.80).rate == 1e-2
    assert predict_post_fec(table, 0.90).rate == 1e-4
    assert predict_post_fec(table, 0.80).verdict == "predicted"


def test_log_linear_midpoint():
    prediction = predict_post_fec(_table(), 0.85)
    assert prediction.verdict == "predicted"
    assert abs(prediction.rate - 1e-3) <= 1e-12 * 1e-3


def test_out_of_range_refused():
    table = _table()
    low = predict_post_fec(table, 0.79)
    assert low.verdict == "above-worst-calibrated"
    assert low.rate == 1e-2
    high = predict_post_fec(table, 0.95)
    assert high.verdict == "below-best-calibrated"
    assert high.rate == 1e-4


def test_threshold_check_cases():
    table = _table()
    assert threshold_check(table, 0.85, 1e-2) == "pass"
    assert threshold_check(table, 0.85, 1e-4) == "fail"
    # Refused extrapolation below the calibrated floor: the bound 1e-4
    # cannot reach the 1e-15 target.
    assert threshold_check(table, 0.95, 1e-15) == "indeterminate"
    assert threshold_check(table, 0.95, 1e-3) == "pass"
    assert threshold_check(table, 0.79, 1e-3) == "fail"
    assert threshold_check(table, 0.79, 0.5) == "indeterminate"
    with pytest.raises(ValueError, match="target rate"):
        threshold_check(table, 0.85, 0.0)


def test_metric_kind_guard():
    table = _table(kind="normalized-GMI")
    with pytest.raises(ValueError, match="mismatch"):
        predict_post_fec(table, 0.85, metric_kind="normalized-MI")
    with pytest.raises(ValueError, match="mismatch"):
        threshold_check(table, 0.85, 1e-3, metric_kind="normalized-MI")
    assert predict_post_fec(table, 0.85, metric_kind="normalized-GMI").verdict == "predicted"


@given(
    st.lists(st.floats(0.01, 0.99), min_size=3, max_size=8, unique=True),
    st.lists(st.floats(-12.0, -0.1), min_size=3, max_size=8, unique=True),
)
@settings(max_examples=50, deadline=None)
def test_predictions_monotone(metrics, log_rates):
    n = min(len(metrics), len(log_rates))
    points = tuple(
        (m, 10.0 ** r) for m, r in zip(sorted(metrics)[:n], sorted(log_rates, reverse=True)[:n])
    )
    table = CalibrationTable("normalized-MI", 0.8, points)
    lo, hi = points[0][0], points[-1][0]
    queries = [lo + (hi - lo) * k / 200 for k in range(201)]
    rates = [predict_post_fec(table, q).rate for q in queries]
    assert all(a >= b - 1e-12 * a for a, b in zip(rates, rates[1:]))
    # every knot reproduced exactly
    for m, r in points:
        assert predict_post_fec(table, m).rate == r
