from __future__ import annotations

import math

import numpy as np
import pytest

import _brute
from manyslit.correlations import central_peak
from manyslit.errors import EnumerationBudgetError
from manyslit.hierarchy import (curve, interference, interference_oracle,
                                vanishing_check)
from manyslit.optics import DetectorPhases, SlitSet, preset_fixed_scan


def phases_of(*values):
    return DetectorPhases(tuple(values))


def random_phases(rng, m):
    return DetectorPhases(tuple(rng.uniform(0.0, 2.0 * math.pi, size=m)))


class TestInterference:
    def test_third_order_single_particle_is_null(self):
        s = SlitSet.contiguous(3)
        rng = np.random.default_rng(5)
        for _ in range(25):
            value = interference(1, s, random_phases(rng, 1)).value
            assert abs(value) / 9.0 < 1e-12

    def test_fifth_order_two_particle_is_null(self):
        s = SlitSet.contiguous(5)
        for delta in (0.0, 0.4, 1.7, 3.9, 6.2):
            value = interference(2, s, phases_of(0.0, delta)).value
            assert abs(value) / 625.0 < 1e-10

    def test_second_order_two_particle_center(self):
        value = interference(2, SlitSet.contiguous(2), phases_of(0.0, 0.0)).value
        assert value == pytest.approx(12.0, abs=1e-12)

    def test_double_slit_dark_fringe(self):
        value = interference(1, SlitSet.contiguous(2), phases_of(math.pi)).value
        assert value == pytest.approx(-2.0, abs=1e-12)

    def test_sinusoid(self):
        s = SlitSet.contiguous(2)
        for delta in np.linspace(0.0, 2 * math.pi, 17):
            got = interference(1, s, phases_of(delta)).value
            assert got == pytest.approx(2 * math.cos(delta), abs=1e-12)

    def test_single_slit_is_exactly_zero(self):
        out = interference(3, SlitSet.contiguous(1), phases_of(0.4, 1.1, 2.2))
        assert out.value == 0.0
        assert out.order == 1

    def test_phase_count_must_match(self):
        with pytest.raises(ValueError, match="phases"):
            interference(2, SlitSet.contiguous(2), phases_of(0.0))

    def test_combination_budget(self):
        with pytest.raises(EnumerationBudgetError):
            interference(1, SlitSet.contiguous(5), phases_of(0.1), budget=10)

    def test_translation_invariance(self):
        rng = np.random.default_rng(21)
        base = SlitSet((0, 1, 3))
        moved = SlitSet((5, 6, 8))
        for _ in range(10):
            ph = random_phases(rng, 2)
            a = interference(2, base, ph).value
            b = interference(2, moved, ph).value
            assert b == pytest.approx(a, rel=1e-10, abs=1e-10)

    def test_matches_brute_reference(self):
        rng = np.random.default_rng(8)
        for n, m in [(2, 1), (3, 1), (2, 2), (3, 2), (4, 2)]:
            s = SlitSet.contiguous(n)
            ph = random_phases(rng, m)
            got = interference(m, s, ph).value
            want = _brute.interference_pairs(s.labels, ph.phases)
            assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


class TestOracle:
    def test_two_slit_cross_terms(self):
        s = SlitSet.contiguous(2)
        for delta in (0.0, 0.5, 2.0, 5.5):
            got = interference_oracle(1, s, phases_of(delta)).value
            assert got == pytest.approx(2 * math.cos(delta), abs=1e-12)

    def test_third_order_null(self):
        rng = np.random.default_rng(13)
        s = SlitSet.contiguous(3)
        for _ in range(20):
            got = interference_oracle(1, s, random_phases(rng, 1)).value
            assert abs(got) < 1e-12

    def test_fifth_order_null(self):
        rng = np.random.default_rng(14)
        s = SlitSet.contiguous(5)
        for _ in range(5):
            got = interference_oracle(2, s, random_phases(rng, 2)).value
            assert abs(got) < 1e-9

    def test_single_slit_exact_zero(self):
        assert interference_oracle(2, SlitSet.contiguous(1), phases_of(0.1, 0.2)).value == 0.0

    def test_agrees_with_subset_route_under_weights(self):
        s = SlitSet((0, 1, 2), (1.0, 0.7, 1.4))
        rng = np.random.default_rng(15)
        for _ in range(10):
            ph = random_phases(rng, 2)
            a = interference(2, s, ph).value
            b = interference_oracle(2, s, ph).value
            assert b == pytest.approx(a, rel=1e-10, abs=1e-10)

    def test_chunk_and_worker_independence(self):
        s = SlitSet.contiguous(3)
        ph = phases_of(1.3, 4.1)
        reference = interference_oracle(2, s, ph).value
        scale = central_peak(s, 2).value
        for kwargs in ({"chunk_size": 1}, {"chunk_size": 5}, {"workers": 3}):
            got = interference_oracle(2, s, ph, **kwargs).value
            assert abs(got - reference) <= 1e-12 * scale

    def test_pair_budget(self):
        with pytest.raises(EnumerationBudgetError):
            interference_oracle(2, SlitSet.contiguous(4), phases_of(0.0, 0.0), budget=10)


class TestVanishingCheck:
    def test_fifth_order_passes(self):
        report = vanishing_check(2, 5, trials=50, seed=3)
        assert report.vanishing_expected
        assert report.passed
        assert report.max_normalized < 1e-10
        assert report.peak == 625.0

    def test_below_threshold_order_fails(self):
        report = vanishing_check(2, 3, trials=50, seed=3)
        assert not report.vanishing_expected
        assert not report.passed
        assert report.max_abs > 0.0

    def test_reproducible(self):
        a = vanishing_check(1, 3, trials=10, seed=42)
        b = vanishing_check(1, 3, trials=10, seed=42)
        assert a == b

    def test_as_dict_keys(self):
        d = vanishing_check(1, 3, trials=2, seed=1).as_dict()
        assert set(d) == {"m", "order", "trials", "seed", "peak", "max_abs",
                          "max_normalized", "vanishing_expected", "threshold",
                          "passed"}

    def test_needs_trials(self):
        with pytest.raises(ValueError):
            vanishing_check(1, 3, trials=0)


class TestCurve:
    # frozen reference values, computed once with an independent
    # pure-python implementation of both scan configurations
    PINNED = {
        ("fixed_scan", 2, 1.0): 0.5201511529340699,
        ("fixed_scan", 2, 2.5): -0.15057180777346685,
        ("opposite_scan", 2, 1.0): 0.3431327983656771,
        ("opposite_scan", 2, 2.5): -0.24011403459056357,
        ("fixed_scan", 3, 1.0): 0.15610589817149848,
        ("fixed_scan", 3, 2.5): -0.08871914143588162,
        ("opposite_scan", 3, 1.0): 0.01723113862604365,
        ("opposite_scan", 3, 2.5): -0.04661626941191262,
        ("fixed_scan", 4, 1.0): -0.003146550813911191,
        ("fixed_scan", 4, 2.5): -0.023272986841864386,
        ("opposite_scan", 4, 1.0): -0.002180951794086128,
        ("opposite_scan", 4, 2.5): 0.01389345801208669,
    }

    def test_pinned_values(self):
        for (preset, n, delta), want in self.PINNED.items():
            [(_, got)] = curve(2, n, preset, [delta])
            assert got == pytest.approx(want, rel=1e-10, abs=1e-12), (preset, n, delta)

    def test_fifth_order_flatline(self):
        rows = curve(2, 5, "fixed_scan", np.linspace(0, 2 * math.pi, 64))
        assert all(abs(v) < 1e-10 for _, v in rows)

    def test_single_point_center(self):
        assert curve(1, 2, "fixed_scan", [0.0]) == [(0.0, pytest.approx(0.5))]

    def test_presets_coincide_at_origin(self):
        [(_, fixed)] = curve(2, 2, "fixed_scan", [0.0])
        [(_, opposite)] = curve(2, 2, "opposite_scan", [0.0])
        assert fixed == pytest.approx(opposite, rel=1e-12)
        assert fixed == pytest.approx(12.0 / 16.0)

    def test_unnormalized(self):
        [(_, raw)] = curve(2, 2, "fixed_scan", [0.0], normalize=False)
        assert raw == pytest.approx(12.0)

    def test_periodicity(self):
        for preset in ("fixed_scan", "opposite_scan"):
            for n in (2, 3, 4):
                rows = curve(2, n, preset, [0.0, 2 * math.pi])
                assert abs(rows[0][1] - rows[1][1]) < 1e-10

    def test_opposite_scan_is_even(self):
        for n in (2, 3, 4):
            left = curve(2, n, "opposite_scan", [-1.3])[0][1]
            right = curve(2, n, "opposite_scan", [1.3])[0][1]
            assert left == pytest.approx(right, rel=1e-12)

    def test_dashed_preset_accepted(self):
        assert curve(2, 2, "fixed-scan", [0.7]) == curve(2, 2, "fixed_scan", [0.7])

    def test_opposite_scan_needs_two_detectors(self):
        with pytest.raises(ValueError, match="opposite-scan"):
            curve(1, 3, "opposite_scan", [0.1])

    def test_unknown_preset(self):
        with pytest.raises(ValueError, match="preset"):
            curve(2, 3, "diagonal_scan", [0.1])

    def test_fixed_scan_matches_manual_phases(self):
        for delta in (0.3, 1.9):
            [(_, via_preset)] = curve(2, 3, "fixed_scan", [delta], normalize=False)
            manual = interference(2, SlitSet.contiguous(3),
                                  preset_fixed_scan(2, delta)).value
            assert via_preset == pytest.approx(manual, rel=1e-12)
