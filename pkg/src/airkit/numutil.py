"""Shared numerical kernels for the rate estimators.

Both the quadrature and Monte Carlo estimators reduce to the same inner
computation: for a reference point x_i and a batch of noise vectors z,
evaluate the pairwise exponents

    e_ij(z) = -(||d_ij||^2 + 2 Re<z, d_ij>) * (N / sigma_z^2),   d_ij = x_i - x_j,

then take stabilized log-sum-exp reductions over the point index j (over
all points for the symbol-wise rate, over a labeling index set for the
bit-wise denominators).  The inner product is <u, v> = sum_d u_d conj(v_d);
only its real part enters, so the side of conjugation is immaterial, but
the convention is fixed here once.

Exponent matrices are evaluated in row blocks so that memory stays bounded
for large constellations or large sample counts.
"""

from __future__ import annotations

import numpy as np

LN2 = float(np.log(2.0))

# Cap on rows*points elements held in one exponent block (~16 MB of float64).
_BLOCK_ELEMENTS = 2_000_000


def logsumexp(a, axis=-1):
    """Natural-log sum of exponentials along ``axis``, max-stabilized."""
    a = np.asarray(a, dtype=float)
    m = np.max(a, axis=axis, keepdims=True)
    out = np.log(np.sum(np.exp(a - m), axis=axis))
    return out + np.squeeze(m, axis=axis)


def log2sumexp(a, axis=-1):
    """Base-2 log of a sum of natural exponentials along ``axis``."""
    return logsumexp(a, axis=axis) / LN2


def pairwise_exponents(points, index, noise, inv_variance):
    """Exponent matrix e_ij(z) for one reference point.

    Parameters
    ----------
    points : (M, N) complex array
    index : int
        Zero-based row of the reference point x_i.
    noise : (K, N) complex array
        Noise vectors z, one per row.
    inv_variance : float
        N / sigma_z^2, the reciprocal per-complex-dimension noise variance.

    Returns
    -------
    (K, M) float array; column ``index`` is exactly zero.
    """
    d = points[index] - points
    sq = np.sum(d.real ** 2 + d.imag ** 2, axis=1)
    cross = 2.0 * (noise @ d.conj().T).real
    return -(sq[np.newaxis, :] + cross) * inv_variance


def _block_rows(num_points):
    return max(1, _BLOCK_ELEMENTS // max(num_points, 1))


def mi_log_terms(points, index, noise, inv_variance):
    """Per-noise-vector terms log2 sum_j exp(e_ij(z)) for one point."""
    rows = _block_rows(points.shape[0])
    out = np.empty(noise.shape[0])
    for start in range(0, noise.shape[0], rows):
        block = noise[start : start + rows]
        expo = pairwise_exponents(points, index, block, inv_variance)
        out[start : start + block.shape[0]] = log2sumexp(expo, axis=1)
    return out


def gmi_log_terms(points, index, noise, inv_variance, label_bits, subsets):
    """Per-noise-vector bit-wise terms for one point.

    For each bit position k the point belongs to exactly one index set
    I_{k,b}; the term is the sum over k of

        log2 [ sum_p exp(e_ip) / sum_{j in I_{k,b}} exp(e_ij) ].

    ``label_bits`` is the (M, m) 0/1 matrix of labels, ``subsets[k][b]``
    the zero-based indices of I_{k+1,b}.
    """
    m = label_bits.shape[1]
    rows = _block_rows(points.shape[0])
    out = np.empty(noise.shape[0])
    for start in range(0, noise.shape[0], rows):
        block = noise[start : start + rows]
        expo = pairwise_exponents(points, index, block, inv_variance)
        total = m * log2sumexp(expo, axis=1)
        for k in range(m):
            members = subsets[k][label_bits[index, k]]
            total -= log2sumexp(expo[:, members], axis=1)
        out[start : start + block.shape[0]] = total
    return out
