import math

import numpy as np
import pytest
from numpy.polynomial.hermite import hermgauss

from airkit import (
    LabeledConstellation,
    NoiseSpec,
    QuadratureSpec,
    gmi_quadrature,
    mi_quadrature,
)
from oracles import BPSK_MI_AT_UNIT_NOISE, mi_binary_real_subchannel, mi_bpsk_adaptive

# Frozen from a 48-node development run; 20-node values must sit close.
QAM16_MI_10DB = 3.16394302329896
QAM16_GMI_10DB = 3.1635792769321203


def _spec(c, sigma2, nodes=20):
    return QuadratureSpec(c, NoiseSpec(sigma2, c.dims), nodes)


def test_hermite_rule_accuracy():
    # The runtime-computed rule must integrate low Gaussian moments to
    # near machine precision: against exp(-t^2), integral of t^(2k) is
    # gamma(k + 1/2).
    t, w = hermgauss(20)
    assert w @ np.ones_like(t) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert w @ t ** 2 == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)
    assert w @ t ** 4 == pytest.approx(3 * math.sqrt(math.pi) / 4, rel=1e-13)


def test_single_point_is_zero():
    c = LabeledConstellation(np.array([0.3 + 0.4j]))
    est = mi_quadrature(_spec(c, 1.0))
    assert est.value == 0.0
    assert est.method == "quadrature"


def test_coincident_points_are_zero():
    with pytest.warns(UserWarning, match="duplicate"):
        c = LabeledConstellation(np.array([1.0 + 0j, 1.0 + 0j]))
    for sigma2 in (0.1, 1.0, 10.0):
        assert mi_quadrature(_spec(c, sigma2)).value == pytest.approx(0.0, abs=1e-12)


def test_bpsk_matches_adaptive_oracle(bpsk):
    oracle = mi_bpsk_adaptive(1.0)
    assert oracle == pytest.approx(BPSK_MI_AT_UNIT_NOISE, abs=1e-7)
    est = mi_quadrature(_spec(bpsk, 1.0))
    # Four significant digits of ~0.72.
    assert est.value == pytest.approx(oracle, abs=5e-5)


def test_qpsk_product_decomposition(qpsk_gray):
    # Unit-energy QPSK is two independent antipodal real subchannels with
    # amplitude 1/sqrt(2) and noise variance sigma2/2 each.
    sub = mi_binary_real_subchannel(1 / math.sqrt(2), 0.5)
    est = mi_quadrature(_spec(qpsk_gray, 1.0))
    assert est.value == pytest.approx(2 * sub, abs=1e-5)
    assert est.value == pytest.approx(0.97, abs=5e-3)


def test_qpsk_equals_two_bpsk_at_matched_real_snr(bpsk, qpsk_gray):
    # Per-real-dimension SNR of BPSK at sigma2=1 equals unit QPSK at 0.5.
    a = mi_quadrature(_spec(qpsk_gray, 0.5)).value
    b = mi_quadrature(_spec(bpsk, 1.0)).value
    assert abs(a - 2 * b) < 1e-8


def test_gmi_equals_mi_for_bpsk(bpsk):
    for sigma2 in (0.25, 1.0, 4.0):
        mi = mi_quadrature(_spec(bpsk, sigma2)).value
        gmi = gmi_quadrature(_spec(bpsk, sigma2)).value
        assert abs(mi - gmi) < 1e-9


def test_gmi_equals_mi_for_gray_qpsk(qpsk_gray):
    for sigma2 in (0.1, 0.5, 1.0, 2.0):
        mi = mi_quadrature(_spec(qpsk_gray, sigma2)).value
        gmi = gmi_quadrature(_spec(qpsk_gray, sigma2)).value
        assert abs(mi - gmi) < 1e-9


def test_gray_qam16_at_10db_pinned(qam16_gray):
    mi = mi_quadrature(_spec(qam16_gray, 0.1)).value
    gmi = gmi_quadrature(_spec(qam16_gray, 0.1)).value
    assert mi == pytest.approx(QAM16_MI_10DB, abs=2e-5)
    assert gmi == pytest.approx(QAM16_GMI_10DB, abs=2e-5)
    assert gmi <= mi
    assert mi - gmi < 0.1


def test_gmi_never_exceeds_mi(qam16_gray, qpsk_anti_gray):
    for c in (qam16_gray, qpsk_anti_gray):
        for snr_db in (0, 6, 12, 18):
            sigma2 = c.energy / 10 ** (snr_db / 10)
            mi = mi_quadrature(_spec(c, sigma2)).value
            gmi = gmi_quadrature(_spec(c, sigma2)).value
            assert gmi <= mi + 1e-9


def test_anti_gray_strictly_below_gray(qpsk_gray, qpsk_anti_gray):
    gmi_gray = gmi_quadrature(_spec(qpsk_gray, 1.0)).value
    gmi_anti = gmi_quadrature(_spec(qpsk_anti_gray, 1.0)).value
    assert gmi_anti < gmi_gray - 0.05


def test_node_convergence(bpsk):
    # Doubling the rule keeps shrinking the change; the worst case over
    # the sweep is ~3e-4 for 10 -> 20 nodes (at 0 dB) and ~5e-5 for
    # 20 -> 40 nodes (near 10 dB, where the decision transition sits at
    # the edge of the node range).
    worst_10_20 = 0.0
    worst_20_40 = 0.0
    for snr_db in (0, 5, 10, 15, 20):
        sigma2 = 1.0 / 10 ** (snr_db / 10)
        v10 = mi_quadrature(_spec(bpsk, sigma2, 10)).value
        v20 = mi_quadrature(_spec(bpsk, sigma2, 20)).value
        v40 = mi_quadrature(_spec(bpsk, sigma2, 40)).value
        worst_10_20 = max(worst_10_20, abs(v20 - v10))
        worst_20_40 = max(worst_20_40, abs(v40 - v20))
    assert worst_10_20 < 1e-3
    assert worst_20_40 < 1e-4
    assert worst_20_40 < worst_10_20


def test_rotation_invariance_low_snr(qam16_gray):
    rotated = LabeledConstellation(qam16_gray.points * np.exp(1j * math.pi / 7), qam16_gray.labels)
    a = mi_quadrature(_spec(qam16_gray, 1.0)).value
    b = mi_quadrature(_spec(rotated, 1.0)).value
    assert abs(a - b) < 1e-8


def test_rotation_invariance_per_dimension():
    # Independent rotation angles per complex dimension.  At 20 nodes the
    # grid anisotropy leaves ~8e-6; refining the rule shrinks it.
    pts = np.array([[a, b] for a in (1.0, -1.0) for b in (1.0, -1.0)], dtype=complex)
    phases = np.exp(1j * np.array([math.pi / 7, math.pi / 3]))
    diffs = {}
    for nodes in (20, 32):
        a = mi_quadrature(QuadratureSpec(LabeledConstellation(pts), NoiseSpec(2.0, 2), nodes)).value
        b = mi_quadrature(
            QuadratureSpec(LabeledConstellation(pts * phases), NoiseSpec(2.0, 2), nodes)
        ).value
        diffs[nodes] = abs(a - b)
    assert diffs[20] < 2e-5
    assert diffs[32] < diffs[20]


def test_rotation_invariance_mid_snr_converged(qam16_gray):
    # At 10 dB the default rule carries ~1e-5 grid anisotropy; once the
    # rule is converged the rotation discrepancy collapses.
    rotated = LabeledConstellation(qam16_gray.points * np.exp(1j * math.pi / 7), qam16_gray.labels)
    a = mi_quadrature(_spec(qam16_gray, 0.1, 44)).value
    b = mi_quadrature(_spec(rotated, 0.1, 44)).value
    assert abs(a - b) < 1e-7


def test_dimension_additivity(bpsk):
    pts = np.array([[a, b] for a in (1.0, -1.0) for b in (1.0, -1.0)], dtype=complex)
    product = LabeledConstellation(pts)
    a = mi_quadrature(QuadratureSpec(product, NoiseSpec(2.0, 2), 20)).value
    b = mi_quadrature(_spec(bpsk, 1.0)).value
    assert abs(a - 2 * b) < 1e-8


def test_dimension_additivity_gmi(qpsk_gray):
    # Gray QPSK x Gray QPSK with concatenated labels keeps the bit
    # subchannels independent, so both rates double.
    pts = np.array([[a, b] for a in qpsk_gray.points[:, 0] for b in qpsk_gray.points[:, 0]])
    labels = [la + lb for la in qpsk_gray.labels for lb in qpsk_gray.labels]
    product = LabeledConstellation(pts, labels)
    a_mi = mi_quadrature(QuadratureSpec(product, NoiseSpec(2.0, 2), 20)).value
    a_gmi = gmi_quadrature(QuadratureSpec(product, NoiseSpec(2.0, 2), 20)).value
    b = mi_quadrature(_spec(qpsk_gray, 1.0)).value
    assert abs(a_mi - 2 * b) < 1e-8
    assert abs(a_gmi - 2 * b) < 1e-8


def test_budget_guard(pm_qpsk):
    with pytest.raises(ValueError, match="budget"):
        QuadratureSpec(pm_qpsk, NoiseSpec(1.0, 2), nodes_per_real_dim=60)
    # Raising the budget admits the same rule.
    QuadratureSpec(pm_qpsk, NoiseSpec(1.0, 2), nodes_per_real_dim=60, node_budget=13_000_000)


def test_spec_validation(bpsk):
    with pytest.raises(ValueError, match="nodes"):
        QuadratureSpec(bpsk, NoiseSpec(1.0, 1), nodes_per_real_dim=1)
    with pytest.raises(ValueError, match="dimensions"):
        QuadratureSpec(bpsk, NoiseSpec(1.0, 2))


def test_gmi_requires_labels():
    c = LabeledConstellation(np.array([1.0 + 0j, -1.0 + 0j]))
    with pytest.raises(ValueError, match="labeled"):
        gmi_quadrature(QuadratureSpec(c, NoiseSpec(1.0, 1)))


def test_estimate_bounds_and_metadata(qam16_gray):
    est = mi_quadrature(_spec(qam16_gray, 0.5))
    assert 0.0 <= est.value <= 4.0
    assert est.raw_value == est.value  # no clamping needed here
    assert est.stderr is None
    assert est.samples_per_point == 400
