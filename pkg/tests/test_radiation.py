import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from patcharray import (
    AngularGrid,
    FarFieldPattern,
    InvalidInput,
    NoCrossing,
    ZeroPattern,
    directivity_dbi,
    element_intensity,
    gain_dbi,
    hpbw,
    principal_cut,
    sample_pattern,
    sidelobe_level_db,
)
from patcharray.errors import InvalidEfficiency
from patcharray.radiation import cut_from_csv, cut_to_csv, pattern_from_csv, pattern_to_csv


def injected(grid, fn):
    t, _ = grid.mesh()
    return FarFieldPattern.from_intensity(grid, fn(np.deg2rad(t)))


def uniform(t):
    return np.ones_like(t)


def cos_theta(t):
    return np.clip(np.cos(t), 0, None)


def cos2_theta(t):
    return np.cos(t) ** 2


def e_plane_oracle(geo, theta_deg):
    """E-plane intensity straight from the slot model, phi = 0."""
    k0 = 2 * math.pi / geo.wavelength_mm
    s = math.sin(math.radians(theta_deg))
    x = k0 * geo.substrate.height_mm / 2 * s
    sinc = math.sin(x) / x if x else 1.0
    return (sinc * math.cos(k0 * (geo.length_mm + 2 * geo.length_extension_mm) / 2 * s)) ** 2


class TestGrid:
    def test_default(self):
        g = AngularGrid()
        assert g.theta_deg[0] == 0 and g.theta_deg[-1] == 90 and g.theta_deg.size == 181
        assert g.phi_deg[0] == 0 and g.phi_deg.size == 720 and g.phi_deg[-1] == 359.5

    @pytest.mark.parametrize("step", [0.7, 0.0, -1.0, 100.0])
    def test_rejects_non_dividing_step(self, step):
        with pytest.raises(InvalidInput):
            AngularGrid(step, 0.5)


class TestElement:
    def test_broadside(self, geo):
        assert element_intensity(geo, 0.0, 0.0) == 1.0
        assert element_intensity(geo, 0.0, 123.0) == 1.0

    def test_e_plane_null_free(self, geo):
        k0 = 2 * math.pi / geo.wavelength_mm
        arg = k0 * geo.radiating_length_mm / 2
        assert arg == pytest.approx(1.1306, abs=2e-4)
        assert arg < math.pi / 2
        theta = np.linspace(0, 90, 9001)
        assert np.all(element_intensity(geo, theta, 0.0) > 0.1)

    def test_h_plane_edge(self, geo):
        k0 = 2 * math.pi / geo.wavelength_mm
        x = k0 * geo.width_mm / 2
        assert x == pytest.approx(1.2419, abs=1e-4)
        expected = (math.sin(x) / x) ** 2
        assert element_intensity(geo, 90.0, 90.0) == pytest.approx(expected, rel=1e-14)
        # quoted hand value 0.5827; exact evaluation gives 0.58077
        assert expected == pytest.approx(0.5827, abs=3e-3)

    def test_symmetry(self, geo, grid):
        t, p = grid.mesh()
        u = element_intensity(geo, t, p)
        np.testing.assert_allclose(u, element_intensity(geo, t, -p), rtol=0, atol=1e-12)
        np.testing.assert_allclose(u, element_intensity(geo, t, 180.0 - p), rtol=0, atol=1e-12)

    def test_obliquity(self, geo):
        assert element_intensity(geo, 60.0, 0.0, obliquity=True) == pytest.approx(
            0.5 * element_intensity(geo, 60.0, 0.0), rel=1e-14)


class TestQuadrature:
    @pytest.mark.parametrize("fn,prad", [(uniform, 2 * math.pi), (cos_theta, math.pi),
                                         (cos2_theta, 2 * math.pi / 3)])
    def test_analytic(self, grid, fn, prad):
        assert injected(grid, fn).prad == pytest.approx(prad, rel=1e-6)

    def test_element_convergence(self, geo):
        coarse = sample_pattern(geo, AngularGrid(0.5, 0.5)).prad
        fine = sample_pattern(geo, AngularGrid(0.25, 0.25)).prad
        assert abs(coarse - fine) / fine < 1e-8

    def test_directivity_refinement(self, geo):
        a = directivity_dbi(sample_pattern(geo, AngularGrid(0.5, 0.5)))
        b = directivity_dbi(sample_pattern(geo, AngularGrid(0.25, 0.25)))
        assert abs(a - b) < 0.01


class TestDirectivity:
    def test_uniform(self, grid):
        assert directivity_dbi(injected(grid, uniform)) == pytest.approx(10 * math.log10(2), abs=1e-5)
        assert directivity_dbi(injected(grid, uniform)) == pytest.approx(3.010, abs=1e-3)

    def test_cos(self, grid):
        assert directivity_dbi(injected(grid, cos_theta)) == pytest.approx(6.021, abs=1e-3)

    def test_element_near_reported_gain(self, element):
        assert directivity_dbi(element) == pytest.approx(7.046, abs=1.5)

    def test_zero(self, grid):
        with pytest.raises(ZeroPattern):
            directivity_dbi(injected(grid, np.zeros_like))

    def test_gain(self, grid, element):
        p = injected(grid, uniform)
        assert gain_dbi(p) == directivity_dbi(p)
        assert gain_dbi(p, 0.5) == pytest.approx(0.0, abs=1e-5)
        assert gain_dbi(element, 0.9) == pytest.approx(directivity_dbi(element) - 0.4576, abs=1e-4)

    @pytest.mark.parametrize("e", [0.0, -0.1, 1.01])
    def test_bad_efficiency(self, element, e):
        with pytest.raises(InvalidEfficiency):
            gain_dbi(element, e)

    @given(st.floats(1e-6, 1e6))
    def test_scale_invariance(self, scale):
        grid = AngularGrid(2.0, 2.0)
        t, _ = grid.mesh()
        base = np.cos(np.deg2rad(t)) ** 3 + 0.1 * np.sin(np.deg2rad(3 * t)) ** 2
        a = FarFieldPattern.from_intensity(grid, base)
        b = FarFieldPattern.from_intensity(grid, base * scale)
        assert directivity_dbi(b) == pytest.approx(directivity_dbi(a), abs=1e-9)
        assert hpbw(b, "E") == pytest.approx(hpbw(a, "E"), abs=1e-9)

    @given(hnp.arrays(float, (7, 12), elements=st.floats(0, 10)))
    def test_at_least_isotropic(self, u):
        grid = AngularGrid(15.0, 30.0)
        p = FarFieldPattern.from_intensity(grid, u)
        # power confined to the theta = 0 row integrates to zero
        assume(p.prad > 0)
        assert directivity_dbi(p) >= -1e-9


class TestBeamwidth:
    def test_cos2(self, grid):
        assert hpbw(injected(grid, cos2_theta), "E") == pytest.approx(90.0, abs=0.5)
        assert hpbw(injected(grid, cos2_theta), "H") == pytest.approx(90.0, abs=0.5)

    def test_element_e_plane_dense_oracle(self, geo, element):
        theta = np.arange(0, 90.0001, 0.01)
        u = np.array([e_plane_oracle(geo, t) for t in theta])
        k = int(np.argmax(u <= 0.5))
        assert k > 0
        oracle = 2 * theta[k]
        assert hpbw(element, "E") == pytest.approx(oracle, abs=0.2)

    def test_element_h_plane_never_halves(self, element):
        with pytest.raises(NoCrossing):
            hpbw(element, "H")

    def test_flat(self, grid):
        with pytest.raises(NoCrossing):
            hpbw(injected(grid, uniform), "E")


class TestSidelobes:
    def test_element_has_none(self, element):
        assert sidelobe_level_db(element, "E") is None

    def test_cos2_has_none(self, grid):
        assert sidelobe_level_db(injected(grid, cos2_theta), "E") is None

    def test_cut_layout(self, element):
        angles, u = principal_cut(element, "E")
        assert angles[0] == -90 and angles[-1] == 90 and angles.size == 361
        np.testing.assert_allclose(u, u[::-1], atol=1e-15)


class TestFiles:
    def test_full_csv_round_trip(self, geo):
        p = sample_pattern(geo, AngularGrid(3.0, 5.0))
        text = pattern_to_csv(p)
        lines = text.splitlines()
        assert lines[0] == "theta_deg,phi_deg,u_linear,gain_dbi"
        assert lines[1].startswith("0.0,0.0,1.0,")
        assert lines[2].startswith("0.0,5.0,")  # phi varies fastest
        back = pattern_from_csv(text)
        np.testing.assert_array_equal(back.intensity, p.intensity)
        assert back.prad == p.prad

    def test_gain_column(self, element):
        row = pattern_to_csv(element).splitlines()[1].split(",")
        assert float(row[3]) == pytest.approx(directivity_dbi(element), abs=1e-12)

    def test_cut_csv(self, geo, element):
        text = cut_to_csv(element, "H")
        assert text.splitlines()[0] == "angle_deg,gain_dbi,normalized_db"
        angle, gain, norm = cut_from_csv(text)
        assert angle[-1] == 90.0
        assert 10 ** (norm[-1] / 10) == pytest.approx(element_intensity(geo, 90.0, 90.0), rel=1e-12)
        assert gain[angle.size // 2] == pytest.approx(directivity_dbi(element), abs=1e-12)
