"""Multidimensional labeled constellations.

A constellation is an ordered list of M points, each a vector of N complex
coordinates, optionally carrying a binary label per point.  Conventions
used throughout the package:

* Point indices are 1-based in documentation and error messages (i = 1..M);
  array storage is 0-based.
* Labels are strings of length log2(M); bit position k = 1 is the leftmost
  character.
* The average energy is the mean of ||x_i||^2 over all points.

Text file format (read by :func:`load_constellation`, written bit-exactly
by :func:`save_constellation`): one point per row, 2N real numbers with Re
and Im interleaved per complex dimension, separated by whitespace and/or
commas, optionally followed by one binary label token.  Lines starting
with '#' are comments.  Either every row carries a label or none does.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "LabeledConstellation",
    "IndexSet",
    "load_constellation",
    "save_constellation",
    "normalize_energy",
    "index_sets",
    "pairwise_differences",
]


class LabeledConstellation:
    """Immutable set of M points in N complex dimensions.

    Parameters
    ----------
    points : array-like
        Complex coordinates, shape (M, N).  A 1-D array of M scalars is
        treated as M points in one complex dimension.
    labels : sequence of str, optional
        Distinct binary strings, one per point, each of length log2(M).
    """

    def __init__(self, points, labels=None):
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[:, np.newaxis]
        if pts.ndim != 2:
            raise ValueError(f"points must be a (M, N) array, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("a constellation needs at least one point in at least one dimension")
        if not np.all(np.isfinite(pts)):
            raise ValueError("constellation coordinates must be finite")

        self._points = pts.copy()
        self._points.setflags(write=False)
        self._labels = self._validated_labels(labels, pts.shape[0])
        p = self._points
        self._energy = float(np.mean(np.sum(p.real ** 2 + p.imag ** 2, axis=1)))

        seen = set()
        for row in map(tuple, self._points):
            if row in seen:
                warnings.warn(
                    "constellation contains duplicate points; rate estimates remain "
                    "well-defined but coincident points carry no information",
                    UserWarning,
                    stacklevel=2,
                )
                break
            seen.add(row)

    @staticmethod
    def _validated_labels(labels, num_points):
        if labels is None:
            return None
        labels = tuple(str(lab) for lab in labels)
        if len(labels) != num_points:
            raise ValueError(f"got {len(labels)} labels for {num_points} points")
        m = math.log2(num_points)
        if num_points < 2 or m != int(m):
            raise ValueError(
                f"labels require the number of points to be a power of two >= 2, got {num_points}"
            )
        m = int(m)
        for lab in labels:
            if len(lab) != m:
                raise ValueError(f"label {lab!r} has length {len(lab)}, expected log2(M) = {m}")
            if set(lab) - {"0", "1"}:
                raise ValueError(f"label {lab!r} is not a binary string")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        return labels

    @property
    def points(self):
        """(M, N) complex array, read-only."""
        return self._points

    @property
    def labels(self):
        return self._labels

    @property
    def energy(self):
        """Mean of ||x_i||^2 over all points."""
        return self._energy

    @property
    def num_points(self):
        return self._points.shape[0]

    @property
    def dims(self):
        """Number of complex dimensions N."""
        return self._points.shape[1]

    @property
    def is_labeled(self):
        return self._labels is not None

    @property
    def bits_per_symbol(self):
        """log2(M); meaningful for bit-wise metrics only when labeled."""
        return int(math.log2(self.num_points)) if self.num_points > 1 else 0

    def label_bits(self):
        """Labels as a (M, log2 M) uint8 matrix; requires labels."""
        if self._labels is None:
            raise ValueError("constellation has no labels")
        return np.array([[int(ch) for ch in lab] for lab in self._labels], dtype=np.uint8)

    def __repr__(self):
        tag = "labeled" if self.is_labeled else "unlabeled"
        return (
            f"LabeledConstellation(M={self.num_points}, N={self.dims}, "
            f"energy={self.energy:.6g}, {tag})"
        )


@dataclass(frozen=True)
class IndexSet:
    """Point indices (1-based) whose label has ``bit_value`` at ``bit_position``."""

    bit_position: int
    bit_value: int
    indices: frozenset

    def __post_init__(self):
        if self.bit_value not in (0, 1):
            raise ValueError(f"bit_value must be 0 or 1, got {self.bit_value}")
        if self.bit_position < 1:
            raise ValueError("bit positions are 1-based")


def _read_text(source):
    if isinstance(source, (str, Path)):
        return Path(source).read_text()
    if isinstance(source, bytes):
        return source.decode()
    data = source.read()
    return data.decode() if isinstance(data, bytes) else data


def load_constellation(source, dims):
    """Parse a constellation from a path, byte string or file object.

    ``dims`` is the number of complex dimensions N; every row must carry
    2N coordinates plus an optional binary label token.
    """
    if dims < 1:
        raise ValueError(f"dims must be >= 1, got {dims}")
    n_cols = 2 * dims

    coords = []
    labels = []
    lines_used = []
    for lineno, raw in enumerate(_read_text(source).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.replace(",", " ").split()
        if len(tokens) not in (n_cols, n_cols + 1):
            raise ValueError(
                f"line {lineno}: expected {n_cols} coordinates plus an optional "
                f"label, got {len(tokens)} tokens"
            )
        row = []
        for tok in tokens[:n_cols]:
            try:
                row.append(float(tok))
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric token {tok!r}") from None
        label = tokens[n_cols] if len(tokens) == n_cols + 1 else None
        if label is not None and (set(label) - {"0", "1"}):
            raise ValueError(f"line {lineno}: label token {label!r} is not a binary string")
        coords.append(row)
        labels.append(label)
        lines_used.append(lineno)

    if not coords:
        raise ValueError("no constellation points in input")

    has_label = [lab is not None for lab in labels]
    if any(has_label) and not all(has_label):
        labeled_line = lines_used[has_label.index(True)]
        bare_line = lines_used[has_label.index(False)]
        raise ValueError(
            f"mixed labeled and unlabeled rows (label on line {labeled_line}, "
            f"none on line {bare_line})"
        )

    arr = np.asarray(coords, dtype=float).reshape(len(coords), dims, 2)
    points = arr[:, :, 0] + 1j * arr[:, :, 1]
    return LabeledConstellation(points, labels if all(has_label) else None)


def save_constellation(constellation, dest):
    """Write the text format read by :func:`load_constellation`.

    Coordinates are emitted with ``repr`` so a round trip reproduces them
    bit-exactly.
    """
    lines = []
    for i in range(constellation.num_points):
        fields = []
        for value in constellation.points[i]:
            fields.append(repr(float(value.real)))
            fields.append(repr(float(value.imag)))
        if constellation.is_labeled:
            fields.append(constellation.labels[i])
        lines.append(" ".join(fields))
    text = "\n".join(lines) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def normalize_energy(constellation, target):
    """Scale all points by one factor so the average energy equals ``target``."""
    if target <= 0:
        raise ValueError(f"target energy must be positive, got {target}")
    if constellation.energy == 0:
        raise ValueError("cannot normalize an all-zero constellation (energy 0)")
    factor = math.sqrt(target / constellation.energy)
    return LabeledConstellation(constellation.points * factor, constellation.labels)


def index_sets(constellation):
    """All labeling index sets, ordered by (bit position, bit value).

    For every bit position k the two sets partition {1, .., M} into halves
    of size M/2.
    """
    bits = constellation.label_bits()
    m = bits.shape[1]
    out = []
    for k in range(m):
        for b in (0, 1):
            members = np.nonzero(bits[:, k] == b)[0] + 1
            if len(members) * 2 != constellation.num_points:
                raise AssertionError("labeling does not split points in half")
            out.append(IndexSet(k + 1, b, frozenset(int(i) for i in members)))
    return out


def pairwise_differences(constellation):
    """(M, M, N) table of difference vectors d_ij = x_i - x_j."""
    pts = constellation.points
    return pts[:, np.newaxis, :] - pts[np.newaxis, :, :]
