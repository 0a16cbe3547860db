"""Achievable information rates for multidimensional constellations.

Computes the symbol-wise rate (mutual information) and bit-wise rate
(generalized mutual information) of arbitrary labeled constellations over
the memoryless complex AWGN channel, by Gauss-Hermite quadrature or Monte
Carlo, estimates the same rates from recorded transmissions, and predicts
post-FEC error rates from normalized rates via calibration tables.
"""

from .channel import (
    NoiseSpec,
    SnrPoint,
    awgn_capacity,
    noise_for,
    sample_noise,
    snr_for,
)
from .constellation import (
    IndexSet,
    LabeledConstellation,
    index_sets,
    load_constellation,
    normalize_energy,
    pairwise_differences,
    save_constellation,
)
from .metrics import (
    HardDecision,
    bit_llrs,
    decide_records,
    hard_decide,
    normalize_rate,
    pre_fec_ber,
    pre_fec_ser,
)
from .montecarlo import (
    AirEstimate,
    NoiseEstimate,
    SymbolRecordSet,
    estimate_noise_variance,
    extract_noise,
    gmi_from_data,
    gmi_mc,
    load_records,
    mi_from_data,
    mi_mc,
    save_records,
    synthesize_records,
)
from .predictor import (
    CalibrationTable,
    Prediction,
    load_calibration,
    predict_post_fec,
    threshold_check,
)
from .quadrature import QuadratureSpec, gmi_quadrature, mi_quadrature

__version__ = "0.1.0"

__all__ = [
    "AirEstimate",
    "CalibrationTable",
    "HardDecision",
    "IndexSet",
    "LabeledConstellation",
    "NoiseEstimate",
    "NoiseSpec",
    "Prediction",
    "QuadratureSpec",
    "SnrPoint",
    "SymbolRecordSet",
    "awgn_capacity",
    "bit_llrs",
    "decide_records",
    "estimate_noise_variance",
    "extract_noise",
    "gmi_from_data",
    "gmi_mc",
    "gmi_quadrature",
    "hard_decide",
    "index_sets",
    "load_calibration",
    "load_constellation",
    "load_records",
    "mi_from_data",
    "mi_mc",
    "mi_quadrature",
    "noise_for",
    "normalize_energy",
    "normalize_rate",
    "pairwise_differences",
    "pre_fec_ber",
    "pre_fec_ser",
    "predict_post_fec",
    "sample_noise",
    "save_constellation",
    "save_records",
    "snr_for",
    "synthesize_records",
    "threshold_check",
]
