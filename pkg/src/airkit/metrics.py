"""Uncoded decision metrics: hard decisions, pre-FEC SER/BER, bit LLRs,
and rate normalization.

Hard decisions are minimum-distance with ties broken toward the lowest
point index.  LLRs are exact (log-sum, not max-log) and use the natural
logarithm, the usual decoder convention; rates elsewhere in the package
are in bits (log base 2).  Positive LLR favors bit value 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constellation import index_sets
from .numutil import logsumexp

__all__ = [
    "HardDecision",
    "hard_decide",
    "decide_records",
    "pre_fec_ser",
    "pre_fec_ber",
    "bit_llrs",
    "normalize_rate",
]

_BLOCK_ROWS = 65536


@dataclass(frozen=True)
class HardDecision:
    """Minimum-distance decision for one record (1-based point index)."""

    decided_index: int
    correct: bool


def _decide_indices(constellation, rx_vectors):
    """1-based argmin-distance indices, lowest index on ties."""
    pts = constellation.points
    rx = np.asarray(rx_vectors, dtype=complex)
    if rx.ndim == 1:
        rx = rx[:, np.newaxis]
    if rx.shape[1] != constellation.dims:
        raise ValueError(
            f"received vectors have {rx.shape[1]} dimensions, constellation has "
            f"{constellation.dims}"
        )
    out = np.empty(rx.shape[0], dtype=np.int64)
    for start in range(0, rx.shape[0], _BLOCK_ROWS):
        diff = rx[start : start + _BLOCK_ROWS, np.newaxis, :] - pts[np.newaxis, :, :]
        d2 = np.sum(diff.real ** 2 + diff.imag ** 2, axis=2)
        out[start : start + d2.shape[0]] = np.argmin(d2, axis=1) + 1
    return out


def hard_decide(constellation, y):
    """Index (1-based) of the closest constellation point to ``y``."""
    return int(_decide_indices(constellation, np.atleast_2d(np.asarray(y, dtype=complex)))[0])


def decide_records(constellation, records):
    """Hard decisions for every record, with correctness flags."""
    decided = _decide_indices(constellation, records.rx_vectors)
    return [
        HardDecision(int(d), bool(d == t))
        for d, t in zip(decided, records.tx_indices)
    ]


def pre_fec_ser(constellation, records):
    """Fraction of records whose hard decision differs from the tx index."""
    if len(records) == 0:
        raise ValueError("empty record set")
    decided = _decide_indices(constellation, records.rx_vectors)
    return float(np.mean(decided != records.tx_indices))


def pre_fec_ber(constellation, records):
    """Hard-decision bit error rate under the constellation's labeling."""
    if not constellation.is_labeled:
        raise ValueError("bit error rate needs a labeled constellation")
    if len(records) == 0:
        raise ValueError("empty record set")
    bits = constellation.label_bits()
    decided = _decide_indices(constellation, records.rx_vectors)
    wrong = bits[decided - 1] != bits[records.tx_indices - 1]
    return float(np.sum(wrong)) / (len(records) * bits.shape[1])


def bit_llrs(constellation, noise, y):
    """Exact per-bit log-likelihood ratios (natural log) for one vector.

    LLR_k = ln sum_{j: bit k = 0} exp(-||y - x_j||^2 N / sigma_z^2)
          - ln sum_{j: bit k = 1} exp(same),
    so positive values favor bit 0.
    """
    if not constellation.is_labeled:
        raise ValueError("LLRs need a labeled constellation")
    if noise.dims != constellation.dims:
        raise ValueError(
            f"noise spec has {noise.dims} dimensions, constellation has {constellation.dims}"
        )
    y = np.asarray(y, dtype=complex).reshape(constellation.dims)
    inv_var = noise.dims / noise.total_variance
    diff = y - constellation.points
    expo = -np.sum(diff.real ** 2 + diff.imag ** 2, axis=1) * inv_var

    m = constellation.bits_per_symbol
    llrs = np.empty(m)
    for s in index_sets(constellation):
        members = np.fromiter((i - 1 for i in sorted(s.indices)), dtype=np.int64)
        part = logsumexp(expo[members])
        if s.bit_value == 0:
            llrs[s.bit_position - 1] = part
        else:
            llrs[s.bit_position - 1] -= part
    return llrs


def normalize_rate(estimate, num_points):
    """Rate divided by log2(M), a value in [0, 1] for clamped estimates."""
    if num_points <= 1:
        raise ValueError(f"normalization needs at least 2 points, got {num_points}")
    value = getattr(estimate, "value", estimate)
    return float(value) / math.log2(num_points)
