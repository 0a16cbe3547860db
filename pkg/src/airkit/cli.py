"""Command-line interface.

Subcommands: mi-sweep, gmi-sweep, capacity, estimate, predict.  Data goes
to stdout or --output; diagnostics and errors go to stderr.  Exit status
is 0 on success, 1 on runtime errors, 2 on usage errors.

CSV columns use a single header row, '.' decimal separator and 12
significant digits, so identical flags and seed give byte-identical
output.  The AIRKIT_SAMPLES environment variable supplies the default
Monte Carlo sample count; an explicit --samples always wins.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys

import numpy as np

from .channel import NoiseSpec, awgn_capacity, noise_for, snr_for
from .constellation import load_constellation
from .metrics import normalize_rate
from .montecarlo import (
    MIN_RECORDS_PER_POINT,
    estimate_noise_variance,
    gmi_from_data,
    gmi_mc,
    load_records,
    mi_from_data,
    mi_mc,
)
from .predictor import (
    METRIC_NORMALIZED_GMI,
    METRIC_NORMALIZED_MI,
    VERDICT_ABOVE_WORST,
    VERDICT_PREDICTED,
    load_calibration,
    predict_post_fec,
    threshold_check,
)
from .quadrature import DEFAULT_NODE_BUDGET, DEFAULT_NODES, QuadratureSpec, gmi_quadrature, mi_quadrature

SAMPLES_ENV = "AIRKIT_SAMPLES"


class _UsageError(ValueError):
    pass


def _fmt(value):
    return format(value, ".12g")


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"--snr-db must be START:STEP:STOP, got {text!r}")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        raise _UsageError(f"--snr-db must be numeric START:STEP:STOP, got {text!r}") from None
    if step <= 0:
        raise _UsageError(f"--snr-db step must be positive, got {step}")
    if start > stop:
        raise _UsageError(f"--snr-db start {start} exceeds stop {stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def _resolve_samples(args):
    if args.samples is not None:
        if args.samples < 1:
            raise _UsageError(f"--samples must be >= 1, got {args.samples}")
        return args.samples
    env = os.environ.get(SAMPLES_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise _UsageError(f"{SAMPLES_ENV}={env!r} is not an integer") from None
        if value < 1:
            raise _UsageError(f"{SAMPLES_ENV} must be >= 1, got {value}")
        return value
    return None


@contextlib.contextmanager
def _open_out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as handle:
            yield handle


def _sweep(args, *, want_gmi):
    constellation = load_constellation(args.constellation, args.dims)
    if want_gmi and not constellation.is_labeled:
        raise ValueError(
            "GMI sweep needs a labeled constellation; the input file carries no labels"
        )
    grid = _parse_grid(args.snr_db)
    method = args.method or ("quadrature" if constellation.dims <= 2 else "monte-carlo")
    samples = _resolve_samples(args)
    if method == "monte-carlo" and samples is None:
        raise _UsageError(
            f"monte-carlo needs a sample count: pass --samples or set {SAMPLES_ENV}"
        )

    max_bits = math.log2(constellation.num_points) if constellation.num_points > 1 else 0.0
    rows = []
    rates = []
    caps = []
    for snr_db in grid:
        snr_linear = 10.0 ** (snr_db / 10.0)
        noise = noise_for(constellation.energy, snr_linear, constellation.dims)
        if method == "quadrature":
            spec = QuadratureSpec(constellation, noise, args.nodes, args.budget)
            estimate = gmi_quadrature(spec) if want_gmi else mi_quadrature(spec)
        else:
            fn = gmi_mc if want_gmi else mi_mc
            estimate = fn(constellation, noise, samples, args.seed)
        stderr_field = "" if estimate.stderr is None else _fmt(estimate.stderr)
        capacity = awgn_capacity(snr_linear, constellation.dims)
        if want_gmi:
            rows.append(
                f"{_fmt(snr_db)},{_fmt(estimate.value)},"
                f"{_fmt(estimate.value / max_bits)},{stderr_field}"
            )
        else:
            rows.append(f"{_fmt(snr_db)},{_fmt(estimate.value)},{stderr_field},{_fmt(capacity)}")
        rates.append(estimate.value)
        caps.append(capacity)

    header = "snr_db,gmi_bits,gmi_normalized,stderr" if want_gmi else "snr_db,mi_bits,stderr,capacity_bits"
    with _open_out(args.output) as out:
        out.write(header + "\n")
        for row in rows:
            out.write(row + "\n")

    if args.figure:
        from .plotting import save_sweep_figure

        label = ("GMI" if want_gmi else "MI") + f" ({method})"
        save_sweep_figure(
            args.figure,
            grid,
            {label: rates},
            capacity=caps,
            ylabel=f"rate [bit / {constellation.dims}-dim symbol]",
        )
    return 0


def _cmd_mi_sweep(args):
    return _sweep(args, want_gmi=False)


def _cmd_gmi_sweep(args):
    return _sweep(args, want_gmi=True)


def _cmd_capacity(args):
    grid = _parse_grid(args.snr_db)
    caps = [awgn_capacity(10.0 ** (snr_db / 10.0), args.dims) for snr_db in grid]
    with _open_out(args.output) as out:
        out.write("snr_db,capacity_bits\n")
        for snr_db, cap in zip(grid, caps):
            out.write(f"{_fmt(snr_db)},{_fmt(cap)}\n")
    if args.figure:
        from .plotting import save_sweep_figure

        save_sweep_figure(
            args.figure, grid, {}, capacity=caps, ylabel=f"capacity [bit / {args.dims}-dim symbol]"
        )
    return 0


def _cmd_estimate(args):
    constellation = load_constellation(args.constellation, args.dims)
    records = load_records(args.records, args.dims)
    if args.metric in ("gmi", "both") and not constellation.is_labeled:
        raise ValueError(
            "GMI estimation needs a labeled constellation; the input file carries no labels"
        )

    noise_est = estimate_noise_variance(constellation, records)
    counts = records.counts(constellation.num_points)
    low = [str(i + 1) for i in np.nonzero(counts < MIN_RECORDS_PER_POINT)[0]]

    estimates = {}
    if args.metric in ("mi", "both"):
        estimates["mi"] = mi_from_data(constellation, records)
    if args.metric in ("gmi", "both"):
        estimates["gmi"] = gmi_from_data(constellation, records)

    lines = [
        f"records: {len(records)}",
        f"estimated_noise_variance: {_fmt(noise_est.total_variance)}",
    ]
    if noise_est.total_variance > 0 and constellation.energy > 0:
        snr = snr_for(constellation.energy, NoiseSpec(noise_est.total_variance, constellation.dims))
        lines.append(f"implied_snr_linear: {_fmt(snr.snr_linear)}")
        lines.append(f"implied_snr_db: {_fmt(snr.snr_db)}")
    elif constellation.energy > 0:
        lines.append("implied_snr_linear: inf")
        lines.append("implied_snr_db: inf")
    else:
        lines.append("implied_snr_linear: undefined (zero-energy constellation)")
    lines.append("per_point_counts: " + " ".join(str(int(c)) for c in counts))
    lines.append(
        f"low_count_points (< {MIN_RECORDS_PER_POINT}): " + (" ".join(low) if low else "none")
    )
    can_normalize = constellation.num_points > 1
    for name, est in estimates.items():
        line = f"{name}_bits: {_fmt(est.value)} (stderr {_fmt(est.stderr)}"
        if can_normalize:
            line += f", normalized {_fmt(normalize_rate(est, constellation.num_points))}"
        lines.append(line + ")")
    with _open_out(args.output) as out:
        for line in lines:
            out.write(line + "\n")

    if args.json:
        payload = {
            "records": len(records),
            "noise_variance_total": noise_est.total_variance,
            "per_point_counts": [int(c) for c in counts],
            "estimates": {},
        }
        if noise_est.total_variance > 0 and constellation.energy > 0:
            snr = snr_for(constellation.energy, NoiseSpec(noise_est.total_variance, constellation.dims))
            payload["snr_linear"] = snr.snr_linear
            payload["snr_db"] = snr.snr_db
        for name, est in estimates.items():
            entry = {
                "bits": est.value,
                "stderr": est.stderr,
                "metric_kind": METRIC_NORMALIZED_MI if name == "mi" else METRIC_NORMALIZED_GMI,
                "samples_per_point": est.samples_per_point,
                "method": est.method,
            }
            if can_normalize:
                entry["normalized"] = normalize_rate(est, constellation.num_points)
            payload["estimates"][name] = entry
        with open(args.json, "w") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
    return 0


def _cmd_predict(args):
    table = load_calibration(args.calibration)
    if args.report is not None:
        with open(args.report) as handle:
            report = json.load(handle)
        try:
            entry = report["estimates"][args.metric]
        except (KeyError, TypeError):
            raise ValueError(f"report has no {args.metric!r} estimate") from None
        if "normalized" not in entry:
            raise ValueError(f"report entry {args.metric!r} carries no normalized value")
        value = entry["normalized"]
        kind = entry.get("metric_kind")
    else:
        value = args.value
        kind = args.metric_kind

    prediction = predict_post_fec(table, value, kind)
    if prediction.verdict == VERDICT_PREDICTED:
        line = f"{prediction.rate:.6g}"
    else:
        bound = ">=" if prediction.verdict == VERDICT_ABOVE_WORST else "<="
        line = f"{prediction.verdict} ({bound} {prediction.rate:.6g})"
    if args.target_ber is not None:
        outcome = threshold_check(table, value, args.target_ber, kind).upper()
        if prediction.verdict == VERDICT_PREDICTED:
            line = f"{line}, {outcome}"
        else:
            line = f"{line}, {outcome} vs {args.target_ber:.6g}"
    with _open_out(args.output) as out:
        out.write(line + "\n")
    return 0


def _add_sweep_flags(parser):
    parser.add_argument("--constellation", required=True, help="constellation text file")
    parser.add_argument("--dims", type=int, default=1, help="complex dimensions N (default 1)")
    parser.add_argument("--snr-db", required=True, metavar="START:STEP:STOP", help="SNR grid in dB")
    parser.add_argument("--method", choices=["quadrature", "monte-carlo"], default=None,
                        help="default: quadrature for N <= 2, monte-carlo otherwise")
    parser.add_argument("--samples", type=int, default=None, help="Monte Carlo samples per point")
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
    parser.add_argument("--nodes", type=int, default=DEFAULT_NODES,
                        help="quadrature nodes per real dimension (default %(default)s)")
    parser.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET,
                        help="max total quadrature nodes (default %(default)s)")
    parser.add_argument("--output", default=None, help="CSV output path (default stdout)")
    parser.add_argument("--figure", default=None, help="also render the sweep to this image file")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="airkit",
        description="Achievable information rates for constellations on the AWGN channel",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mi-sweep", help="symbol-wise rate over an SNR grid")
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_mi_sweep)

    p = sub.add_parser("gmi-sweep", help="bit-wise rate over an SNR grid (labeled constellations)")
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_gmi_sweep)

    p = sub.add_parser("capacity", help="Gaussian-input capacity over an SNR grid")
    p.add_argument("--dims", type=int, default=1, help="complex dimensions N (default 1)")
    p.add_argument("--snr-db", required=True, metavar="START:STEP:STOP", help="SNR grid in dB")
    p.add_argument("--output", default=None, help="CSV output path (default stdout)")
    p.add_argument("--figure", default=None, help="also render the curve to this image file")
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("estimate", help="data-driven rate estimation from recorded symbols")
    p.add_argument("--constellation", required=True, help="constellation text file")
    p.add_argument("--dims", type=int, default=1, help="complex dimensions N (default 1)")
    p.add_argument("--records", required=True, help="records text file (tx index + 2N reals per row)")
    p.add_argument("--metric", choices=["mi", "gmi", "both"], default="mi")
    p.add_argument("--output", default=None, help="report output path (default stdout)")
    p.add_argument("--json", default=None, help="also write a machine-readable JSON report")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("predict", help="post-FEC error rate from a calibration table")
    p.add_argument("--calibration", required=True, help="calibration table file")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--value", type=float, help="normalized metric value in [0, 1]")
    source.add_argument("--report", help="JSON report from 'estimate --json'")
    p.add_argument("--metric", choices=["mi", "gmi"], default="mi",
                   help="which estimate to read from --report")
    p.add_argument("--metric-kind", choices=[METRIC_NORMALIZED_MI, METRIC_NORMALIZED_GMI],
                   default=None, help="kind of the supplied --value, checked against the table")
    p.add_argument("--target-ber", type=float, default=None, help="target post-FEC error rate")
    p.add_argument("--output", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_predict)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
