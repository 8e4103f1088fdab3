"""Slit gratings, detector phases, and the far-field phase convention.

A slit sits at an integer position ``s`` on the grating plane.  A detector
placed at far-field angle ``theta`` sees adjacent slits with a relative
optical phase ``delta = 2 pi d sin(theta) / lambda``, so the amplitude a
detector picks up from slit ``s`` is ``w_s * exp(i s delta)``.  Everything
downstream is periodic in each detector phase with period ``2 pi``; phases
are stored as given, never reduced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

TWO_PI = 2.0 * math.pi


def _as_int(value: object) -> int:
    out = int(value)  # type: ignore[call-overload]
    if out != value:
        raise ValueError(f"slit label {value!r} is not an integer")
    return out


@dataclass(frozen=True)
class SlitSet:
    """An ordered grating: strictly increasing slit positions with complex weights.

    ``labels`` are the integer slit positions; ``weights`` the per-slit
    transmission amplitudes, defaulting to 1 for every slit.
    """

    labels: tuple[int, ...]
    weights: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        labels = tuple(_as_int(s) for s in self.labels)
        if not labels:
            raise ValueError("a grating needs at least one slit")
        if any(s < 0 for s in labels):
            raise ValueError("slit labels must be non-negative")
        if any(b <= a for a, b in zip(labels, labels[1:])):
            raise ValueError("slit labels must be strictly increasing")
        weights = tuple(complex(w) for w in self.weights)
        if not weights:
            weights = (1.0 + 0.0j,) * len(labels)
        if len(weights) != len(labels):
            raise ValueError(
                f"got {len(weights)} weights for {len(labels)} slits"
            )
        if any(not (math.isfinite(w.real) and math.isfinite(w.imag)) for w in weights):
            raise ValueError("slit weights must be finite")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def contiguous(cls, n: int) -> "SlitSet":
        """A unit-weight grating of ``n`` slits at positions ``0 .. n-1``."""
        if n < 1:
            raise ValueError(f"slit count must be positive, got {n}")
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)

    def subset(self, labels: Iterable[int]) -> "SlitSet":
        """The sub-grating keeping only ``labels``, weights carried along.

        Labels keep their original positions, so phase relations between the
        surviving slits are untouched.
        """
        keep = sorted({_as_int(s) for s in labels})
        index = {s: i for i, s in enumerate(self.labels)}
        missing = [s for s in keep if s not in index]
        if missing:
            raise ValueError(f"labels {missing} are not slits of this grating")
        return SlitSet(tuple(keep), tuple(self.weights[index[s]] for s in keep))

    def weight_map(self) -> dict[int, complex]:
        return dict(zip(self.labels, self.weights))

    def total_intensity(self) -> float:
        """Sum of per-slit intensities ``|w_s|**2`` (the incoherent total)."""
        return math.fsum(abs(w) ** 2 for w in self.weights)


@dataclass(frozen=True)
class Geometry:
    """Grating pitch and illumination wavelength, in the same length unit."""

    slit_spacing: float
    wavelength: float

    def __post_init__(self) -> None:
        for name in ("slit_spacing", "wavelength"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class DetectorPhases:
    """One optical phase per detector; the length sets the particle number M."""

    phases: tuple[float, ...]

    def __post_init__(self) -> None:
        phases = tuple(float(p) for p in self.phases)
        if not phases:
            raise ValueError("at least one detector is required")
        if any(not math.isfinite(p) for p in phases):
            raise ValueError("detector phases must be finite")
        object.__setattr__(self, "phases", phases)

    @property
    def m(self) -> int:
        return len(self.phases)

    def __len__(self) -> int:
        return len(self.phases)

    def __iter__(self) -> Iterator[float]:
        return iter(self.phases)


def phase_from_angle(geometry: Geometry, theta: float) -> float:
    """Inter-slit phase for a detector at angle ``theta`` off the grating normal."""
    theta = float(theta)
    if not math.isfinite(theta) or abs(theta) >= math.pi / 2:
        raise ValueError(f"detector angle must satisfy |theta| < pi/2, got {theta!r}")
    return TWO_PI * geometry.slit_spacing * math.sin(theta) / geometry.wavelength


def preset_fixed_scan(m: int, delta: float) -> DetectorPhases:
    """M-1 detectors parked on central-peak phases, the last one scanning.

    The parked detectors sit at ``0, 2 pi, ..., (m-2) * 2 pi``: all on the
    central maximum but at distinct positions.  With ``m = 1`` this is just
    the single scanning detector.
    """
    if m < 1:
        raise ValueError(f"detector count must be positive, got {m}")
    return DetectorPhases(tuple(TWO_PI * i for i in range(m - 1)) + (float(delta),))


def preset_opposite_scan(delta: float) -> DetectorPhases:
    """Two detectors scanning mirror-symmetric positions, phases ``(delta, -delta)``."""
    return DetectorPhases((float(delta), -float(delta)))
