"""Post-FEC error-rate prediction from normalized rate metrics.

A calibration table holds measured (metric, post-FEC error rate) pairs for
one code rate, with the metric either the normalized symbol-wise rate
(for nonbinary soft-decision decoders) or the normalized bit-wise rate
(for binary ones).  Prediction interpolates log10(error rate) linearly in
the metric.  Outside the calibrated range no extrapolation is attempted:
post-FEC waterfalls are too steep for that to mean anything, so queries
past the ends return an explicit verdict with the nearest calibrated rate
as a one-sided bound.

Calibration file format: '#' comments, two header lines

    metric_kind normalized-GMI
    code_rate 0.80

in any order before, after or between the data rows, and one data row per
calibration point: ``metric error_rate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "CalibrationTable",
    "Prediction",
    "load_calibration",
    "predict_post_fec",
    "threshold_check",
]

METRIC_NORMALIZED_MI = "normalized-MI"
METRIC_NORMALIZED_GMI = "normalized-GMI"
_METRIC_KINDS = (METRIC_NORMALIZED_MI, METRIC_NORMALIZED_GMI)

VERDICT_PREDICTED = "predicted"
VERDICT_ABOVE_WORST = "above-worst-calibrated"
VERDICT_BELOW_BEST = "below-best-calibrated"


@dataclass(frozen=True)
class CalibrationTable:
    """Monotone (metric, post-FEC error rate) pairs for one code rate."""

    metric_kind: str
    code_rate: float
    points: tuple

    def __post_init__(self):
        if self.metric_kind not in _METRIC_KINDS:
            raise ValueError(
                f"metric_kind must be one of {_METRIC_KINDS}, got {self.metric_kind!r}"
            )
        if not 0.0 < self.code_rate < 1.0:
            raise ValueError(f"code_rate must be in (0, 1), got {self.code_rate}")
        pts = tuple((float(m), float(r)) for m, r in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValueError(f"need at least 2 calibration points, got {len(pts)}")
        for metric, rate in pts:
            if not 0.0 <= metric <= 1.0:
                raise ValueError(f"metric value {metric} outside [0, 1]")
            if not 0.0 < rate <= 1.0:
                raise ValueError(f"error rate {rate} outside (0, 1]")
        for (m0, r0), (m1, r1) in zip(pts, pts[1:]):
            if m1 <= m0:
                raise ValueError(f"metric values must strictly increase ({m0} then {m1})")
            if r1 >= r0:
                raise ValueError(f"error rates must strictly decrease ({r0} then {r1})")


@dataclass(frozen=True)
class Prediction:
    """Outcome of a prediction query.

    ``rate`` is the interpolated error rate when ``verdict`` is
    ``predicted``; for refused out-of-range queries it is the nearest
    calibrated rate, bounding the true rate from below
    (above-worst-calibrated) or above (below-best-calibrated).
    """

    verdict: str
    rate: float


def _read_text(source):
    if isinstance(source, (str, Path)):
        return Path(source).read_text()
    if isinstance(source, bytes):
        return source.decode()
    data = source.read()
    return data.decode() if isinstance(data, bytes) else data


def load_calibration(source):
    """Parse and validate a calibration table."""
    metric_kind = None
    code_rate = None
    points = []
    for lineno, raw in enumerate(_read_text(source).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "metric_kind":
            if len(tokens) != 2:
                raise ValueError(f"line {lineno}: metric_kind takes one value")
            metric_kind = tokens[1]
        elif tokens[0] == "code_rate":
            if len(tokens) != 2:
                raise ValueError(f"line {lineno}: code_rate takes one value")
            try:
                code_rate = float(tokens[1])
            except ValueError:
                raise ValueError(f"line {lineno}: code_rate {tokens[1]!r} is not a number") from None
        else:
            if len(tokens) != 2:
                raise ValueError(
                    f"line {lineno}: expected 'metric error_rate', got {len(tokens)} tokens"
                )
            try:
                points.append((float(tokens[0]), float(tokens[1])))
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric calibration row") from None
    if metric_kind is None:
        raise ValueError("missing 'metric_kind' header")
    if code_rate is None:
        raise ValueError("missing 'code_rate' header")
    return CalibrationTable(metric_kind, code_rate, tuple(points))


def _check_kind(table, metric_kind):
    if metric_kind is not None and metric_kind != table.metric_kind:
        raise ValueError(
            f"metric kind mismatch: table is calibrated for {table.metric_kind}, "
            f"query is {metric_kind}"
        )


def predict_post_fec(table, metric_value, metric_kind=None):
    """Predict the post-FEC error rate for a normalized metric value.

    Calibration knots are reproduced exactly; between knots the rate is
    interpolated linearly in log10; outside the calibrated range the
    prediction is refused with a one-sided verdict.
    """
    _check_kind(table, metric_kind)
    metric_value = float(metric_value)

    for metric, rate in table.points:
        if metric_value == metric:
            return Prediction(VERDICT_PREDICTED, rate)

    metrics = [m for m, _ in table.points]
    if metric_value < metrics[0]:
        return Prediction(VERDICT_ABOVE_WORST, table.points[0][1])
    if metric_value > metrics[-1]:
        return Prediction(VERDICT_BELOW_BEST, table.points[-1][1])

    hi = next(idx for idx, m in enumerate(metrics) if m > metric_value)
    (m0, r0), (m1, r1) = table.points[hi - 1], table.points[hi]
    t = (metric_value - m0) / (m1 - m0)
    log_rate = math.log10(r0) + t * (math.log10(r1) - math.log10(r0))
    return Prediction(VERDICT_PREDICTED, 10.0 ** log_rate)


def threshold_check(table, metric_value, target_rate, metric_kind=None):
    """Compare the prediction against a target rate.

    Returns ``"pass"``, ``"fail"``, or ``"indeterminate"`` when a refused
    out-of-range query leaves a bound that does not settle the comparison.
    """
    if not 0.0 < target_rate < 1.0:
        raise ValueError(f"target rate must be in (0, 1), got {target_rate}")
    prediction = predict_post_fec(table, metric_value, metric_kind)
    if prediction.verdict == VERDICT_PREDICTED:
        return "pass" if prediction.rate <= target_rate else "fail"
    if prediction.verdict == VERDICT_ABOVE_WORST:
        # True rate is at least the bound.
        return "fail" if prediction.rate > target_rate else "indeterminate"
    # True rate is at most the bound.
    return "pass" if prediction.rate <= target_rate else "indeterminate"
