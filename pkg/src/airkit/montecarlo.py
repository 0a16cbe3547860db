"""Monte Carlo rate estimators and the data-driven estimation pipeline.

The symbol-wise rate (MI) estimator averages, for every constellation
point i, the terms

    L_i(z) = log2 sum_j exp(-(||d_ij||^2 + 2 Re<z, d_ij>) N / sigma_z^2)

over noise realizations z, giving  log2 M - (1/M) sum_i mean(L_i).  The
bit-wise rate (GMI) replaces L_i by the sum over bit positions of the
log-ratio between the full sum and the sum restricted to the labeling
index set containing i; it therefore requires labels and never exceeds
the symbol-wise rate in expectation.

By default every point uses an independent noise stream derived from the
base seed (``SeedSequence(seed).spawn``); pass ``shared_noise=True`` to
reuse one batch across points (common random numbers, lower variance when
comparing labelings of the same point set).

For recorded transmissions the same sums are evaluated on noise extracted
from the records (received minus transmitted), with the noise variance
replaced by its estimate from those records.  The averages are taken per
point, so unbalanced record counts are handled naturally.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import _sample_with
from .constellation import index_sets
from .numutil import gmi_log_terms, mi_log_terms

__all__ = [
    "AirEstimate",
    "NoiseEstimate",
    "SymbolRecordSet",
    "mi_mc",
    "gmi_mc",
    "estimate_noise_variance",
    "extract_noise",
    "mi_from_data",
    "gmi_from_data",
    "synthesize_records",
    "load_records",
    "save_records",
]

METHOD_QUADRATURE = "quadrature"
METHOD_MONTE_CARLO = "monte-carlo"
METHOD_DATA_DRIVEN = "data-driven"

# Per-point record counts below this trigger a reliability warning.
MIN_RECORDS_PER_POINT = 100


@dataclass(frozen=True)
class AirEstimate:
    """A rate estimate in bits per N-dimensional symbol.

    ``value`` is clamped to [0, log2 M]; ``raw_value`` keeps the unclamped
    number for diagnostics.  ``samples_per_point`` is the Monte Carlo
    sample count per point, the total node count for quadrature, or the
    smallest per-point record count for data-driven estimates.  ``stderr``
    is the standard error of the sample mean (None for quadrature).
    """

    value: float
    method: str
    samples_per_point: int
    seed: int | None = None
    stderr: float | None = None
    raw_value: float | None = None


@dataclass(frozen=True)
class NoiseEstimate:
    """Total noise variance estimated from records, with diagnostics."""

    total_variance: float
    mean_error: np.ndarray
    num_records: int


class SymbolRecordSet:
    """Paired (transmitted index, received vector) observations.

    ``tx_indices`` are 1-based point indices; ``rx_vectors`` is a (T, N)
    complex array of received symbols.
    """

    def __init__(self, tx_indices, rx_vectors):
        tx = np.asarray(tx_indices)
        if tx.ndim != 1:
            raise ValueError("tx_indices must be one-dimensional")
        if tx.size and not np.issubdtype(tx.dtype, np.integer):
            as_int = tx.astype(int)
            if not np.array_equal(as_int, tx):
                raise ValueError("tx_indices must be integers")
            tx = as_int
        rx = np.asarray(rx_vectors, dtype=complex)
        if rx.ndim == 1:
            rx = rx[:, np.newaxis]
        if rx.shape[0] != tx.shape[0]:
            raise ValueError(
                f"{tx.shape[0]} tx indices but {rx.shape[0]} received vectors"
            )
        if tx.size and tx.min() < 1:
            raise ValueError("tx indices are 1-based; found an index < 1")
        self._tx = tx.astype(np.int64, copy=True)
        self._rx = rx.copy()
        self._tx.setflags(write=False)
        self._rx.setflags(write=False)

    @property
    def tx_indices(self):
        return self._tx

    @property
    def rx_vectors(self):
        return self._rx

    @property
    def dims(self):
        return self._rx.shape[1]

    def __len__(self):
        return self._tx.shape[0]

    def counts(self, num_points):
        """Records per point, as an array of length ``num_points``."""
        return np.bincount(self._tx - 1, minlength=num_points)[:num_points]

    def __repr__(self):
        return f"SymbolRecordSet(T={len(self)}, N={self.dims})"


def _check_compatible(constellation, records):
    if records.dims != constellation.dims:
        raise ValueError(
            f"records have {records.dims} complex dimensions, constellation has "
            f"{constellation.dims}"
        )
    if len(records) and records.tx_indices.max() > constellation.num_points:
        bad = int(records.tx_indices.max())
        raise ValueError(
            f"tx index {bad} exceeds the number of constellation points "
            f"({constellation.num_points})"
        )


def _point_rngs(seed, num_points):
    children = np.random.SeedSequence(seed).spawn(num_points)
    return [np.random.default_rng(child) for child in children]


def _subset_arrays(constellation):
    """Zero-based index arrays of every labeling set, as subsets[k][b]."""
    m = constellation.bits_per_symbol
    subsets = [[None, None] for _ in range(m)]
    for s in index_sets(constellation):
        members = np.fromiter((i - 1 for i in sorted(s.indices)), dtype=np.int64)
        subsets[s.bit_position - 1][s.bit_value] = members
    return subsets


def _finish(raw, max_bits, method, samples_per_point, seed, stderr):
    return AirEstimate(
        value=min(max(raw, 0.0), max_bits),
        method=method,
        samples_per_point=samples_per_point,
        seed=seed,
        stderr=stderr,
        raw_value=raw,
    )


def _mc_estimate(constellation, noise, n_samples, seed, shared_noise, term_fn):
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if noise.dims != constellation.dims:
        raise ValueError(
            f"noise spec has {noise.dims} dimensions, constellation has {constellation.dims}"
        )
    pts = constellation.points
    M = constellation.num_points
    inv_var = noise.dims / noise.total_variance

    if shared_noise:
        batch = _sample_with(np.random.default_rng(np.random.SeedSequence(seed)), noise, n_samples)
        rngs = None
    else:
        rngs = _point_rngs(seed, M)

    mean_sum = 0.0
    var_over_n = 0.0
    for i in range(M):
        z = batch if shared_noise else _sample_with(rngs[i], noise, n_samples)
        terms = term_fn(pts, i, z, inv_var)
        mean_sum += terms.mean()
        if n_samples > 1:
            var_over_n += terms.var(ddof=1) / n_samples

    raw = math.log2(M) - mean_sum / M
    stderr = math.sqrt(var_over_n) / M
    return raw, stderr


def mi_mc(constellation, noise, n_samples, seed, *, shared_noise=False):
    """Monte Carlo estimate of the symbol-wise rate (MI), in bits/symbol."""
    raw, stderr = _mc_estimate(constellation, noise, n_samples, seed, shared_noise, mi_log_terms)
    return _finish(
        raw, math.log2(constellation.num_points), METHOD_MONTE_CARLO, n_samples, seed, stderr
    )


def gmi_mc(constellation, noise, n_samples, seed, *, shared_noise=False):
    """Monte Carlo estimate of the bit-wise rate (GMI); requires labels.

    With the same seed the per-point noise pairs up with :func:`mi_mc`, so
    for a 2-point constellation the two estimates coincide term by term.
    """
    if not constellation.is_labeled:
        raise ValueError("GMI needs a labeled constellation")
    bits = constellation.label_bits()
    subsets = _subset_arrays(constellation)

    def term_fn(pts, i, z, inv_var):
        return gmi_log_terms(pts, i, z, inv_var, bits, subsets)

    raw, stderr = _mc_estimate(constellation, noise, n_samples, seed, shared_noise, term_fn)
    return _finish(
        raw, math.log2(constellation.num_points), METHOD_MONTE_CARLO, n_samples, seed, stderr
    )


def estimate_noise_variance(constellation, records):
    """Mean squared error between received and transmitted symbols.

    Returns the total variance over all N complex dimensions plus the mean
    error vector as a bias diagnostic.
    """
    _check_compatible(constellation, records)
    if len(records) < 2:
        raise ValueError(f"need at least 2 records to estimate noise, got {len(records)}")
    errors = records.rx_vectors - constellation.points[records.tx_indices - 1]
    total = float(np.mean(np.sum(errors.real ** 2 + errors.imag ** 2, axis=1)))
    return NoiseEstimate(total, errors.mean(axis=0), len(records))


def extract_noise(constellation, records):
    """Noise realizations y_t - x_i grouped by point, order preserved.

    Returns a dict mapping every 1-based point index to a (T_i, N) array;
    points without records map to empty arrays.
    """
    _check_compatible(constellation, records)
    out = {}
    for i in range(1, constellation.num_points + 1):
        mask = records.tx_indices == i
        out[i] = records.rx_vectors[mask] - constellation.points[i - 1]
    return out


def _data_estimate(constellation, records, term_fn):
    noise_est = estimate_noise_variance(constellation, records)
    by_point = extract_noise(constellation, records)
    for i, z in by_point.items():
        if z.shape[0] == 0:
            raise ValueError(
                f"no records for constellation point {i}; every point must be observed"
            )
    min_count = min(z.shape[0] for z in by_point.values())
    if min_count < MIN_RECORDS_PER_POINT:
        warnings.warn(
            f"fewest records for a single point is {min_count} "
            f"(< {MIN_RECORDS_PER_POINT}); the estimate may be unreliable",
            UserWarning,
            stacklevel=3,
        )

    M = constellation.num_points
    max_bits = math.log2(M)
    if noise_est.total_variance == 0.0:
        # Perfect reception: the channel is noiseless as recorded.
        return _finish(max_bits, max_bits, METHOD_DATA_DRIVEN, min_count, None, 0.0), noise_est

    inv_var = constellation.dims / noise_est.total_variance
    pts = constellation.points
    mean_sum = 0.0
    var_over_n = 0.0
    for i in range(1, M + 1):
        z = by_point[i]
        terms = term_fn(pts, i - 1, z, inv_var)
        mean_sum += terms.mean()
        if z.shape[0] > 1:
            var_over_n += terms.var(ddof=1) / z.shape[0]

    raw = max_bits - mean_sum / M
    stderr = math.sqrt(var_over_n) / M
    return _finish(raw, max_bits, METHOD_DATA_DRIVEN, min_count, None, stderr), noise_est


def mi_from_data(constellation, records):
    """Symbol-wise rate estimated from recorded transmissions.

    Uses the noise variance estimated from the same records in the decision
    metric, so this is an achievable rate for the mismatched Gaussian
    metric even when the records did not come from an AWGN channel.
    """
    estimate, _ = _data_estimate(constellation, records, mi_log_terms)
    return estimate


def gmi_from_data(constellation, records):
    """Bit-wise rate estimated from recorded transmissions; requires labels."""
    if not constellation.is_labeled:
        raise ValueError("GMI needs a labeled constellation")
    bits = constellation.label_bits()
    subsets = _subset_arrays(constellation)

    def term_fn(pts, i, z, inv_var):
        return gmi_log_terms(pts, i, z, inv_var, bits, subsets)

    estimate, _ = _data_estimate(constellation, records, term_fn)
    return estimate


def synthesize_records(constellation, noise, samples_per_point, seed):
    """Simulate an AWGN transmission with a fixed count per point.

    Point i's noise comes from the same derived stream that :func:`mi_mc`
    uses for point i, so data-driven estimates on these records can be
    compared directly against the synthetic estimators.
    """
    if samples_per_point < 1:
        raise ValueError(f"samples_per_point must be >= 1, got {samples_per_point}")
    if noise.dims != constellation.dims:
        raise ValueError(
            f"noise spec has {noise.dims} dimensions, constellation has {constellation.dims}"
        )
    rngs = _point_rngs(seed, constellation.num_points)
    tx = []
    rx = []
    for i in range(constellation.num_points):
        z = _sample_with(rngs[i], noise, samples_per_point)
        tx.append(np.full(samples_per_point, i + 1, dtype=np.int64))
        rx.append(constellation.points[i] + z)
    return SymbolRecordSet(np.concatenate(tx), np.vstack(rx))


def _read_text(source):
    if isinstance(source, (str, Path)):
        return Path(source).read_text()
    if isinstance(source, bytes):
        return source.decode()
    data = source.read()
    return data.decode() if isinstance(data, bytes) else data


def load_records(source, dims):
    """Parse records: one row per record, tx index then 2N real numbers.

    Whitespace and/or comma separated; '#' starts a comment.
    """
    if dims < 1:
        raise ValueError(f"dims must be >= 1, got {dims}")
    n_cols = 1 + 2 * dims
    tx = []
    coords = []
    for lineno, raw in enumerate(_read_text(source).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.replace(",", " ").split()
        if len(tokens) != n_cols:
            raise ValueError(
                f"line {lineno}: expected {n_cols} columns (tx index plus "
                f"{2 * dims} coordinates), got {len(tokens)}"
            )
        try:
            idx = int(tokens[0])
        except ValueError:
            raise ValueError(f"line {lineno}: tx index {tokens[0]!r} is not an integer") from None
        if idx < 1:
            raise ValueError(f"line {lineno}: tx index {idx} is not 1-based")
        row = []
        for tok in tokens[1:]:
            try:
                row.append(float(tok))
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric token {tok!r}") from None
        tx.append(idx)
        coords.append(row)
    if not tx:
        raise ValueError("no records in input")
    arr = np.asarray(coords, dtype=float).reshape(len(tx), dims, 2)
    return SymbolRecordSet(np.asarray(tx), arr[:, :, 0] + 1j * arr[:, :, 1])


def save_records(records, dest):
    """Write the text format read by :func:`load_records`."""
    lines = []
    for t in range(len(records)):
        fields = [str(int(records.tx_indices[t]))]
        for value in records.rx_vectors[t]:
            fields.append(repr(float(value.real)))
            fields.append(repr(float(value.imag)))
        lines.append(" ".join(fields))
    text = "\n".join(lines) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)
