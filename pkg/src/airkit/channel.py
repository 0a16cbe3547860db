"""Discrete-time memoryless complex AWGN channel.

Noise is specified by its total complex variance sigma_z^2 across all N
complex dimensions; each complex coordinate is circularly symmetric with
variance sigma_z^2 / N (so sigma_z^2 / (2N) per real coordinate).  SNR is
defined as total signal power over total noise power, sigma_x^2 / sigma_z^2,
which makes the Gaussian-input capacity N * log2(1 + SNR) under the equal
per-dimension split.

Reproducibility: :func:`sample_noise` draws from
``numpy.random.default_rng(numpy.random.SeedSequence(seed))``.  Estimators
that need one independent stream per constellation point derive them as
``SeedSequence(seed).spawn(M)`` (child i has spawn key ``(i,)``), so results
do not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoiseSpec",
    "SnrPoint",
    "sample_noise",
    "awgn_capacity",
    "snr_for",
    "noise_for",
]

_DB_RTOL = 1e-12


@dataclass(frozen=True)
class NoiseSpec:
    """Total complex noise variance spread evenly over ``dims`` dimensions."""

    total_variance: float
    dims: int = 1

    def __post_init__(self):
        if self.total_variance <= 0:
            raise ValueError(f"total noise variance must be positive, got {self.total_variance}")
        if self.dims < 1:
            raise ValueError(f"dims must be >= 1, got {self.dims}")

    @property
    def per_complex_dim(self):
        return self.total_variance / self.dims

    @property
    def per_real_dim(self):
        return self.total_variance / (2 * self.dims)


@dataclass(frozen=True)
class SnrPoint:
    """SNR as a linear ratio with a consistent dB view."""

    snr_linear: float
    snr_db: float | None = None

    def __post_init__(self):
        if self.snr_linear <= 0:
            raise ValueError(f"snr_linear must be positive, got {self.snr_linear}")
        db = 10.0 * math.log10(self.snr_linear)
        if self.snr_db is None:
            object.__setattr__(self, "snr_db", db)
        elif abs(self.snr_db - db) > _DB_RTOL * max(1.0, abs(db)):
            raise ValueError(
                f"inconsistent SNR views: {self.snr_db} dB vs {self.snr_linear} linear"
            )

    @classmethod
    def from_db(cls, snr_db):
        return cls(10.0 ** (snr_db / 10.0), float(snr_db))


def _sample_with(rng, spec, count):
    # One standard-normal draw of shape (count, 2N): even columns real parts,
    # odd columns imaginary parts, scaled to sigma_z^2/(2N) per real coordinate.
    raw = rng.standard_normal((count, 2 * spec.dims))
    scale = math.sqrt(spec.per_real_dim)
    return scale * (raw[:, 0::2] + 1j * raw[:, 1::2])


def sample_noise(spec, count, seed):
    """Draw ``count`` circularly-symmetric noise vectors, reproducibly.

    Returns a (count, N) complex array; each coordinate has complex
    variance sigma_z^2 / N.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return _sample_with(rng, spec, count)


def awgn_capacity(snr, dims=1):
    """Gaussian-input capacity N * log2(1 + SNR) in bits per N-dim symbol."""
    linear = snr.snr_linear if isinstance(snr, SnrPoint) else float(snr)
    if linear <= 0:
        raise ValueError(f"snr must be positive, got {linear}")
    return dims * math.log2(1.0 + linear)


def snr_for(energy, noise):
    """SNR of a constellation energy against a noise spec (total over total)."""
    if energy <= 0:
        raise ValueError(f"signal energy must be positive, got {energy}")
    return SnrPoint(energy / noise.total_variance)


def noise_for(energy, snr, dims=1):
    """Noise spec that puts ``energy`` at the given SNR."""
    if energy <= 0:
        raise ValueError(f"signal energy must be positive, got {energy}")
    linear = snr.snr_linear if isinstance(snr, SnrPoint) else float(snr)
    return NoiseSpec(energy / linear, dims)
