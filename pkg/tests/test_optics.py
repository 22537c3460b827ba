import math

import numpy as np
import pytest

from lfscope.errors import AfocalConfiguration, ZeroMagnification
from lfscope.optics import (
    ConjugatePair,
    OpticalElement,
    OpticalTrain,
    Regime,
    axial_marginal,
    chain_magnification,
    chief_arrival_slope,
    classify_regime,
    conjugate,
    conjugate_pair,
    entrance_pupil,
    f_number,
    image_plane,
    microscope_f_number,
    optical_invariant,
    solve_lens_placement,
    summarize,
    system_efl,
    trace_to_elements,
    working_f_number,
)


def single_lens(f=50.0, d=25.0, object_distance=100.0):
    el = OpticalElement(focal_length_mm=f, aperture_diameter_mm=d,
                        axial_position_mm=object_distance)
    return OpticalTrain((el,), object_plane_mm=0.0)


class TestConjugate:
    def test_two_f_symmetry(self):
        assert conjugate(50, 100) == (100, -1)

    def test_demagnifying(self):
        v, m = conjugate(50, 150)
        # oracle: substitute back into the thin-lens formula
        assert 1 / v == pytest.approx(1 / 50 - 1 / 150, rel=1e-12)
        assert (v, m) == (75, -0.5)

    def test_virtual_image(self):
        v, m = conjugate(50, 25)
        assert 1 / v == pytest.approx(1 / 50 - 1 / 25, rel=1e-12)
        assert (v, m) == (-50, 2)

    def test_afocal(self):
        with pytest.raises(AfocalConfiguration):
            conjugate(50, 50)

    def test_contact_conjugate(self):
        assert conjugate(50, 0) == (0.0, 1.0)

    def test_virtual_object(self):
        v, m = conjugate(50, -25)
        assert v == pytest.approx(1 / (1 / 50 + 1 / 25))
        assert m == pytest.approx(-v / -25)
        assert 0 < m < 1


class TestLensPlacement:
    def test_unit_inverting(self):
        assert solve_lens_placement(50, -1) == 100

    def test_eq_value(self):
        x = solve_lens_placement(85, -0.4)
        assert x == pytest.approx(297.5)
        _, m = conjugate(85, x)
        assert m == pytest.approx(-0.4, rel=1e-12)

    def test_virtual_branch(self):
        x = solve_lens_placement(50, 2)
        assert x == 25
        _, m = conjugate(50, x)
        assert m == pytest.approx(2, rel=1e-12)

    def test_zero_magnification(self):
        with pytest.raises(ZeroMagnification):
            solve_lens_placement(50, 0)


class TestFNumbers:
    def test_simple(self):
        assert f_number(50, 25) == 2

    def test_slow(self):
        assert f_number(140, 7) == 20

    def test_pupil_positive(self):
        with pytest.raises(ValueError):
            f_number(50, 0)

    def test_microscope_paper_value(self):
        # 10x/0.2 objective behind a 0.8x tube
        assert microscope_f_number(8, 0.2) == 20

    def test_microscope_direct(self):
        assert microscope_f_number(10, 0.25) == 20
        assert microscope_f_number(2, 0.5) == 2

    def test_microscope_domain(self):
        with pytest.raises(ValueError):
            microscope_f_number(8, 0)

    def test_working_limit_case(self):
        assert working_f_number(1, -1) == 2

    def test_working_common_lens(self):
        assert working_f_number(3.5, -1) == 7.0

    def test_working_zero_mag(self):
        assert working_f_number(2, 0) == 2


class TestChainMagnification:
    def test_microscope_direct_coupling(self):
        assert chain_magnification([10, 0.5]) == 5

    def test_identity(self):
        assert chain_magnification([1]) == 1

    def test_relay_design_chain(self):
        assert chain_magnification([8, -0.6, -0.3, 2.0]) == pytest.approx(2.88, rel=1e-12)


class TestInvariant:
    def test_identity_pair(self):
        pair = ConjugatePair(1, 10, math.asin(0.2), math.asin(0.02), 10, 0)
        assert optical_invariant(pair, 1, 1) == pytest.approx(0.0, abs=1e-15)

    def test_mismatched_pair(self):
        pair = ConjugatePair(1, 10, math.asin(0.2), math.asin(0.04), 10, 0)
        assert optical_invariant(pair, 1, 1) == pytest.approx(-0.2, rel=1e-12)

    def test_traced_pair_conserves(self):
        train = single_lens(f=50, d=25, object_distance=100)
        pair = conjugate_pair(train, object_height_mm=1.0)
        rel = abs(optical_invariant(pair, 1, 1)) / abs(
            pair.object_height_mm * math.sin(pair.object_half_angle_rad))
        assert rel < 1e-9


class TestRegime:
    def make(self):
        return single_lens(object_distance=100.0)

    def test_in_front(self):
        assert classify_regime(self.make(), 70.0) is Regime.REGULAR

    def test_behind(self):
        assert classify_regime(self.make(), 130.0) is Regime.INVERSE

    def test_boundary(self):
        assert classify_regime(self.make(), 100.0) is Regime.REGULAR

    def test_antisymmetric(self):
        train = self.make()
        for dz in (0.1, 5, 50):
            assert classify_regime(train, 100 - dz) is Regime.REGULAR
            assert classify_regime(train, 100 + dz) is Regime.INVERSE


class TestTraceEngine:
    def test_single_lens_image(self):
        train = single_lens(f=50, d=25, object_distance=100)
        z, m = image_plane(train)
        assert z == pytest.approx(200)
        assert m == pytest.approx(-1)

    def test_marginal_and_summary(self):
        train = single_lens(f=50, d=25, object_distance=100)
        u_max, stop = axial_marginal(train)
        assert u_max == pytest.approx(12.5 / 100)
        assert stop == 0
        s = summarize(train)
        assert s.total_magnification == pytest.approx(-1)
        assert s.image_side_na == pytest.approx(0.125)
        assert s.working_f_number == pytest.approx(4.0)  # (1-M) N = 2*2
        assert s.f_number == pytest.approx(2.0)
        assert s.regime is Regime.REGULAR

    def test_working_f_number_identity(self):
        # N_w from the traced cone equals (1 - M) f/D for a single thin lens
        for d_o in (75.0, 120.0, 300.0):
            el = OpticalElement(50, 20, d_o)
            train = OpticalTrain((el,), object_plane_mm=0.0)
            s = summarize(train)
            assert s.working_f_number == pytest.approx(
                working_f_number(50 / 20, s.total_magnification), rel=1e-9)

    def test_entrance_pupil_single_lens(self):
        train = single_lens(f=50, d=25, object_distance=100)
        z_ep, epd = entrance_pupil(train)
        assert z_ep == pytest.approx(100)
        assert epd == pytest.approx(25)

    def test_efl_two_lens(self):
        # oracle: 1/F = 1/f1 + 1/f2 - s/(f1 f2)
        e1 = OpticalElement(100, 40, 0.0)
        e2 = OpticalElement(50, 40, 30.0)
        train = OpticalTrain((e1, e2), object_plane_mm=-1000.0)
        expected = 1 / (1 / 100 + 1 / 50 - 30 / (100 * 50))
        assert system_efl(train) == pytest.approx(expected, rel=1e-12)

    def test_virtual_object_transfer(self):
        # object plane behind the lens: negative transfer, no special casing
        el = OpticalElement(50, 40, 100.0)
        train = OpticalTrain((el,), object_plane_mm=125.0)
        z, m = image_plane(train)
        v, m_ref = conjugate(50, -25)
        assert z == pytest.approx(100 + v)
        assert m == pytest.approx(m_ref)

    def test_vectorized_heights(self):
        train = single_lens(f=50, d=25, object_distance=100)
        y0 = np.array([0.0, 1.0, -1.0])
        u0 = np.array([0.1, 0.0, 0.05])
        h, y_out, u_out = trace_to_elements(train, y0, u0)
        assert h.shape == (1, 3)
        np.testing.assert_allclose(h[0], y0 + 100 * u0)

    def test_chief_arrival_slope_single_lens(self):
        # chief through the stop (the lens): arrives with slope Q / image_dist
        train = single_lens(f=50, d=25, object_distance=100)
        coeff = chief_arrival_slope(train)
        assert coeff == pytest.approx(1 / 100.0)


class TestMultiElementChain:
    def build_staged(self, mags, focals):
        """Sequential stages, each solved by placement; returns the train."""
        z = 0.0
        elements = []
        obj = 0.0
        for m, f in zip(mags, focals):
            x = solve_lens_placement(f, m)
            lens_z = obj + x
            v, _ = conjugate(f, x)
            elements.append(OpticalElement(f, 60.0, lens_z))
            obj = lens_z + v
        return OpticalTrain(tuple(elements), object_plane_mm=0.0), obj

    def test_chain_equals_trace(self):
        mags = [-2.0, -0.5, -1.5]
        train, img = self.build_staged(mags, [40.0, 60.0, 80.0])
        z, m = image_plane(train)
        assert z == pytest.approx(img, rel=1e-9)
        assert m == pytest.approx(chain_magnification(mags), rel=1e-9)

    def test_lagrange_through_stages(self):
        train, _ = self.build_staged([-2.0, -0.5], [40.0, 60.0])
        pair = conjugate_pair(train, object_height_mm=0.7)
        scale = abs(pair.object_height_mm * math.sin(pair.object_half_angle_rad))
        assert abs(optical_invariant(pair, 1, 1)) / scale < 1e-9
