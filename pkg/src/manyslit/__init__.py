"""Many-particle interference hierarchies behind multi-slit gratings.

Core objects: gratings and detector phases (`optics`), path enumeration and
pair reductions (`paths`), coincidence signals (`correlations`), interference
terms of every order with an independent brute-force cross-check
(`hierarchy`), and Sorkin-parameter sensitivity tools (`sorkin`).
"""
from __future__ import annotations

from .correlations import (CorrelationValue, SignedCorrelation, central_peak,
                           classical_correlation, exclusive_classical,
                           grating_amplitude, quantum_correlation)
from .errors import (DegenerateNormalizationError, EnumerationBudgetError,
                     RecursionBudgetError)
from .hierarchy import (InterferenceValue, VanishingReport, curve,
                        interference, interference_oracle, vanishing_check)
from .optics import (DetectorPhases, Geometry, SlitSet, phase_from_angle,
                     preset_fixed_scan, preset_opposite_scan)
from .paths import (MultiPath, PathPair, diagonal_sum, enumerate_paths,
                    is_diagonal, joint_support, pair_sum, path_amplitude,
                    path_count)
from .sorkin import (DeviationModel, SensitivityReport, deviation_linearized,
                     deviation_montecarlo, sensitivity_c, sensitivity_ratio,
                     sensitivity_table, sorkin, sorkin_with_deviations)

__version__ = "0.1.0"

__all__ = [
    "CorrelationValue", "SignedCorrelation", "central_peak",
    "classical_correlation", "exclusive_classical", "grating_amplitude",
    "quantum_correlation",
    "DegenerateNormalizationError", "EnumerationBudgetError",
    "RecursionBudgetError",
    "InterferenceValue", "VanishingReport", "curve", "interference",
    "interference_oracle", "vanishing_check",
    "DetectorPhases", "Geometry", "SlitSet", "phase_from_angle",
    "preset_fixed_scan", "preset_opposite_scan",
    "MultiPath", "PathPair", "diagonal_sum", "enumerate_paths", "is_diagonal",
    "joint_support", "pair_sum", "path_amplitude", "path_count",
    "DeviationModel", "SensitivityReport", "deviation_linearized",
    "deviation_montecarlo", "sensitivity_c", "sensitivity_ratio",
    "sensitivity_table", "sorkin", "sorkin_with_deviations",
    "__version__",
]
