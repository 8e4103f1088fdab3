"""Coincidence signals for a slit subset: quantum, classical, and exclusive.

``quantum_correlation`` is the M-fold coincidence rate behind the grating,
which factorizes into a product of single-detector diffraction intensities.
``classical_correlation`` is its incoherent counterpart (independent
particles, no which-path coherence), flat in the detector phases.  The
*exclusive* classical term is the part of the classical signal owed to
paths that use every slit of the subset at least once; it is defined by
peeling the exclusive terms of all proper sub-combinations off the plain
classical signal, and is what the interference hierarchy subtracts so that
classical many-particle combinatorics never masquerade as interference.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import RecursionBudgetError
from .optics import DetectorPhases, SlitSet

DEFAULT_EXCLUSIVE_MAX_SLITS = 16


@dataclass(frozen=True)
class CorrelationValue:
    """A coincidence-rate value together with what it was evaluated for."""

    value: float
    m: int
    slits: SlitSet
    phases: DetectorPhases


@dataclass(frozen=True)
class SignedCorrelation:
    """An exclusive-order classical term; may legitimately be negative."""

    value: float
    order: int
    m: int


def grating_amplitude(slits: SlitSet, delta: float) -> complex:
    """Single-detector amplitude ``sum_s w_s exp(i s delta)`` at phase ``delta``."""
    delta = float(delta)
    if not math.isfinite(delta):
        raise ValueError(f"detector phase must be finite, got {delta!r}")
    return sum((w * cmath.exp(1j * s * delta) for s, w in zip(slits.labels, slits.weights)),
               start=complex(0.0))


def quantum_correlation(slits: SlitSet, phases: DetectorPhases) -> CorrelationValue:
    """Coincidence rate: the product of ``|grating_amplitude|**2`` per detector."""
    value = 1.0
    for delta in phases:
        value *= abs(grating_amplitude(slits, delta)) ** 2
    return CorrelationValue(value=value, m=phases.m, slits=slits, phases=phases)


def classical_correlation(slits: SlitSet, phases: DetectorPhases) -> CorrelationValue:
    """Incoherent coincidence rate ``(sum_s |w_s|**2) ** M``; phase-flat."""
    value = slits.total_intensity() ** phases.m
    return CorrelationValue(value=value, m=phases.m, slits=slits, phases=phases)


def exclusive_classical(slits: SlitSet, phases: DetectorPhases, *,
                        max_slits: int = DEFAULT_EXCLUSIVE_MAX_SLITS) -> SignedCorrelation:
    """Classical signal from paths using *every* slit of the subset.

    Built bottom-up over subset bitmasks: the exclusive term of a subset is
    its plain classical signal minus the exclusive terms of all proper
    non-empty sub-combinations.  Runs over all ``3**N`` (mask, submask)
    pairs, so ``max_slits`` caps the subset size.

    For unit weights this counts the surjections of M detectors onto N
    slits, and is 0 whenever ``N > M``.
    """
    n = len(slits)
    if n > max_slits:
        raise RecursionBudgetError(
            f"exclusive classical term over {n} slits exceeds the cap of {max_slits}",
            n=n, max_slits=max_slits,
        )
    m = phases.m
    intensities = [abs(w) ** 2 for w in slits.weights]
    full = (1 << n) - 1

    # plain classical signal per mask, then peel sub-combinations off
    exclusive = [0.0] * (full + 1)
    for mask in range(1, full + 1):
        plain = math.fsum(intensities[i] for i in range(n) if mask >> i & 1) ** m
        parts = [plain]
        sub = (mask - 1) & mask
        while sub:
            parts.append(-exclusive[sub])
            sub = (sub - 1) & mask
        exclusive[mask] = math.fsum(parts)

    return SignedCorrelation(value=exclusive[full], order=n, m=m)


def central_peak(slits: SlitSet, m: int) -> CorrelationValue:
    """Coincidence rate with every detector on the central maximum."""
    if m < 1:
        raise ValueError(f"detector count must be positive, got {m}")
    return quantum_correlation(slits, DetectorPhases((0.0,) * m))
