import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from airkit import LabeledConstellation, normalize_energy

SQ2 = math.sqrt(2.0)

GRAY2 = ["00", "01", "11", "10"]


@pytest.fixture
def bpsk():
    return LabeledConstellation(np.array([1.0 + 0j, -1.0 + 0j]), ["0", "1"])


@pytest.fixture
def qpsk_gray():
    pts = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / SQ2
    return LabeledConstellation(pts, GRAY2)


@pytest.fixture
def qpsk_anti_gray():
    pts = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / SQ2
    return LabeledConstellation(pts, ["00", "11", "01", "10"])


@pytest.fixture
def qam16_gray():
    levels = [-3.0, -1.0, 1.0, 3.0]
    pts, labs = [], []
    for a, ga in zip(levels, GRAY2):
        for b, gb in zip(levels, GRAY2):
            pts.append((a + 1j * b) / math.sqrt(10.0))
            labs.append(ga + gb)
    return LabeledConstellation(np.array(pts), labs)


@pytest.fixture
def pm_qpsk():
    """Unit-energy polarization-multiplexed QPSK: 16 points in N=2."""
    qpsk = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / SQ2
    pts = np.array([[a, b] for a in qpsk for b in qpsk])
    return normalize_energy(LabeledConstellation(pts), 1.0)
