"""Interference terms of every order, and checks that high orders vanish.

The Nth-order M-particle interference term is what remains of an N-slit
coincidence signal after removing everything attributable to fewer slits:
alternating over the coincidence signals of all sub-gratings, then
subtracting the exclusive classical term of the full slit set.  The same
quantity is recomputed here by a brute-force reduction over path pairs
(``interference_oracle``), which shares no code path with the subset route
and serves as its independent check.

For gratings wider than twice the particle number every path pair leaves
some slit untouched, so the term vanishes identically; ``vanishing_check``
probes that over random detector phases.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import paths
from .correlations import (DEFAULT_EXCLUSIVE_MAX_SLITS, central_peak,
                           exclusive_classical, quantum_correlation)
from .errors import EnumerationBudgetError
from .optics import (DetectorPhases, SlitSet, preset_fixed_scan,
                     preset_opposite_scan)

DEFAULT_COMBINATION_BUDGET = 1 << 20
DEFAULT_SEED = 12345
_ORACLE_IMAG_TOL = 1e-10

PRESETS = ("fixed_scan", "opposite_scan")


@dataclass(frozen=True)
class InterferenceValue:
    """An interference-term value and the context it was evaluated in."""

    value: float
    m: int
    order: int
    slits: SlitSet
    phases: DetectorPhases
    method: str


def _check_m(m: int, phases: DetectorPhases) -> None:
    if m < 1:
        raise ValueError(f"particle number must be positive, got {m}")
    if phases.m != m:
        raise ValueError(f"got {phases.m} detector phases for {m} particles")


def interference(m: int, slits: SlitSet, phases: DetectorPhases, *,
                 budget: int = DEFAULT_COMBINATION_BUDGET,
                 max_slits: int = DEFAULT_EXCLUSIVE_MAX_SLITS) -> InterferenceValue:
    """Interference term of order ``len(slits)`` via subset alternation.

    The alternating subset contributions are collected and combined with
    compensated summation, since the cancellation is exact in the vanishing
    regime and catastrophic for naive accumulation.  A single slit supports
    no interference at all, so order 1 returns exactly 0.0.
    """
    _check_m(m, phases)
    n = len(slits)
    if n == 1:
        return InterferenceValue(value=0.0, m=m, order=n, slits=slits,
                                 phases=phases, method="subset_alternation")
    subsets = (1 << n) - 1
    if subsets > budget:
        raise EnumerationBudgetError(
            f"order-{n} interference needs {subsets} subset evaluations, "
            f"over the budget of {budget}",
            n=n, m=m, required=subsets, budget=budget,
        )
    # the classical term goes first so its slit cap trips before the loop
    classical = exclusive_classical(slits, phases, max_slits=max_slits).value
    terms = []
    for size in range(n, 0, -1):
        sign = -1.0 if (n - size) % 2 else 1.0
        for combo in itertools.combinations(slits.labels, size):
            sub = slits.subset(combo)
            terms.append(sign * quantum_correlation(sub, phases).value)
    terms.append(-classical)
    return InterferenceValue(value=math.fsum(terms), m=m, order=n, slits=slits,
                             phases=phases, method="subset_alternation")


def interference_oracle(m: int, slits: SlitSet, phases: DetectorPhases, *,
                        budget: int = paths.DEFAULT_PAIR_BUDGET,
                        chunk_size: int = 4096,
                        workers: int | None = None) -> InterferenceValue:
    """Same quantity as ``interference``, from first principles.

    Sums ``amp(ket) * conj(amp(bra))`` over the path pairs that are
    off-diagonal and jointly use every slit: the diagonal pairs of full
    support are exactly the exclusive classical term, and pairs missing a
    slit belong to lower orders, so this residue is the interference term.
    Costs ``N**(2M)`` pair visits; meant for cross-checks at small sizes.
    """
    _check_m(m, phases)
    n = len(slits)
    if n == 1:
        return InterferenceValue(value=0.0, m=m, order=n, slits=slits,
                                 phases=phases, method="path_pairs")
    total = paths.pair_sum(slits, phases, exact_support=slits.labels,
                           include_diagonal=False, budget=budget,
                           chunk_size=chunk_size, workers=workers)
    if abs(total.imag) >= _ORACLE_IMAG_TOL:
        raise ArithmeticError(
            f"pair reduction left an imaginary residue of {total.imag!r}; "
            "the conjugate-pair cancellation did not hold"
        )
    return InterferenceValue(value=total.real, m=m, order=n, slits=slits,
                             phases=phases, method="path_pairs")


@dataclass(frozen=True)
class VanishingReport:
    """Outcome of probing an interference term over random detector phases."""

    m: int
    order: int
    trials: int
    seed: int
    peak: float
    max_abs: float
    max_normalized: float
    vanishing_expected: bool
    threshold: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "order": self.order,
            "trials": self.trials,
            "seed": self.seed,
            "peak": self.peak,
            "max_abs": self.max_abs,
            "max_normalized": self.max_normalized,
            "vanishing_expected": self.vanishing_expected,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def vanishing_check(m: int, order: int, *, trials: int = 20,
                    seed: int = DEFAULT_SEED,
                    threshold: float = 1e-9) -> VanishingReport:
    """Evaluate the order-``order`` term at random phases and compare to zero.

    Residues are normalized by the all-detectors-on-peak coincidence rate so
    the threshold is scale free.  Passing means every draw stayed below the
    threshold; for gratings of fewer than ``2 m + 1`` slits the term is
    genuinely nonzero and the check is expected to fail.
    """
    if trials < 1:
        raise ValueError(f"trial count must be positive, got {trials}")
    slits = SlitSet.contiguous(order)
    peak = central_peak(slits, m).value
    rng = np.random.default_rng(seed)
    max_abs = 0.0
    for _ in range(trials):
        phases = DetectorPhases(tuple(rng.uniform(0.0, 2.0 * math.pi, size=m)))
        max_abs = max(max_abs, abs(interference(m, slits, phases).value))
    max_normalized = max_abs / peak
    return VanishingReport(
        m=m, order=order, trials=trials, seed=seed, peak=peak,
        max_abs=max_abs, max_normalized=max_normalized,
        vanishing_expected=order >= 2 * m + 1, threshold=threshold,
        passed=max_normalized < threshold,
    )


def _preset_phases(preset: str, m: int, delta: float) -> DetectorPhases:
    name = preset.replace("-", "_")
    if name == "fixed_scan":
        return preset_fixed_scan(m, delta)
    if name == "opposite_scan":
        if m != 2:
            raise ValueError("the opposite-scan preset needs exactly 2 detectors")
        return preset_opposite_scan(delta)
    raise ValueError(f"unknown preset {preset!r}; choose from {PRESETS}")


def curve(m: int, order: int, preset: str, deltas: Sequence[float], *,
          normalize: bool = True) -> list[tuple[float, float]]:
    """Interference term along a scan of the last detector phase.

    Returns ``(delta, value)`` pairs; with ``normalize`` the values are
    divided by the central-peak coincidence rate of the full grating.
    """
    slits = SlitSet.contiguous(order)
    scale = central_peak(slits, m).value if normalize else 1.0
    out = []
    for delta in deltas:
        phases = _preset_phases(preset, m, float(delta))
        out.append((float(delta), interference(m, slits, phases).value / scale))
    return out
