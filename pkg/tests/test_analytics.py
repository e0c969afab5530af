import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chiral_skin.analytics import (
    alpha_analytic,
    bound_energy_pi,
    bound_state_analytic,
    inv_mass_analytic,
    localization_length_analytic,
    scattering_energy_analytic,
)
from chiral_skin.dispersion import seed_state, trace_branch
from chiral_skin.errors import DomainError
from chiral_skin.waveguide_qed import ModelParams, scattering_continuum

# frozen with 30-digit arithmetic
KAPPA_02 = 1.174359  # -ln cos(0.4 pi)
EPS_PI_02 = 0.6498393924658125
TAN_02 = -0.7265425280053609
ALPHA_035_095 = -0.32829291066904373
ALPHA_035_095_LINEAR = -0.32008558790231762
INV_MASS_035 = 12.564066749557615
INV_MASS_02 = 0.08097765478024294
ASINH_0075 = 0.07492986488487722


class TestBoundState:
    def test_kappa(self):
        assert bound_state_analytic(0.2 * np.pi, 200).kappa == pytest.approx(KAPPA_02, abs=1e-6)

    def test_normalization(self):
        bs = bound_state_analytic(0.2 * np.pi, 200)
        assert sum(abs(v) ** 2 for v in bs.chi0.values()) == pytest.approx(1.0, abs=1e-10)

    def test_energy_matches_branch(self):
        bs = bound_state_analytic(0.2 * np.pi, 200)
        assert bs.eps_pi0 == pytest.approx(EPS_PI_02, abs=1e-14)
        b = trace_branch(ModelParams(phi=0.2 * np.pi, xi=1.0), k_grid=np.array([np.pi]))
        assert b.energy_at(np.pi).real == pytest.approx(EPS_PI_02, abs=1e-3)

    @pytest.mark.parametrize("phi", [0.2 * np.pi, 0.35 * np.pi])
    def test_wavefunction_overlap(self, phi):
        r_max = 200
        bs = bound_state_analytic(phi, r_max)
        ref = bs.vector(np.arange(1, r_max + 1))
        num = seed_state(ModelParams(phi=phi, xi=1.0), r_max).vector
        assert abs(np.vdot(ref / np.linalg.norm(ref), num)) >= 0.999

    def test_only_even_r(self):
        bs = bound_state_analytic(0.2 * np.pi, 50)
        assert all(r % 2 == 0 for r in bs.chi0)
        assert bs.chi0[2] == bs.chi0[-2]

    def test_domain(self):
        with pytest.raises(DomainError):
            bound_state_analytic(np.pi / 4, 200)
        with pytest.raises(DomainError):
            bound_state_analytic(0.2 * np.pi, 3)


class TestScattering:
    def test_q_pi(self):
        phi = 0.3
        assert scattering_energy_analytic(phi, np.pi) == pytest.approx(1 / np.tan(phi))

    def test_q_0(self):
        assert scattering_energy_analytic(0.2 * np.pi, 0.0) == pytest.approx(TAN_02, abs=1e-12)

    def test_brackets_numeric_continuum(self):
        phi = 0.2 * np.pi
        q = np.linspace(-np.pi, np.pi, 4001)
        q = q[np.abs(np.sin(phi) ** 2 - np.cos(q / 2) ** 2) > 1e-3]
        e = scattering_energy_analytic(phi, q)
        c = scattering_continuum(ModelParams(phi=phi, xi=1.0), np.pi)
        inside = [c.contains(x, margin=0.02 * max(1, abs(x))) for x in e]
        assert np.mean(inside) > 0.99

    def test_resonance_guard(self):
        phi = 0.2 * np.pi
        q = 2 * np.arccos(np.sin(phi))
        with pytest.raises(DomainError):
            scattering_energy_analytic(phi, q)


class TestAlpha:
    def test_nonchiral_zero(self):
        assert alpha_analytic(0.35 * np.pi, 1.0) == 0.0

    def test_values(self):
        assert alpha_analytic(0.35 * np.pi, 0.95) == pytest.approx(ALPHA_035_095, rel=1e-12)
        assert alpha_analytic(0.35 * np.pi, 0.95, form="linear") == pytest.approx(ALPHA_035_095_LINEAR, rel=1e-12)

    def test_sign_flip_at_pi_6(self):
        d = 0.01
        assert alpha_analytic(np.pi / 6 - d, 0.9) * alpha_analytic(np.pi / 6 + d, 0.9) < 0

    def test_unknown_form(self):
        with pytest.raises(ValueError):
            alpha_analytic(0.3, 0.9, form="other")


class TestInvMass:
    def test_flat_point(self):
        assert inv_mass_analytic(np.pi / 6) == pytest.approx(0.0, abs=1e-14)

    def test_values(self):
        assert inv_mass_analytic(0.35 * np.pi) == pytest.approx(INV_MASS_035, rel=1e-12)
        assert inv_mass_analytic(0.2 * np.pi) == pytest.approx(INV_MASS_02, rel=1e-12)

    def test_bound_energy_pi(self):
        assert bound_energy_pi(0.35 * np.pi) == pytest.approx(-1.4530850560107213, rel=1e-14)


class TestLocalization:
    def test_hermitian_limit(self):
        assert localization_length_analytic(1.0, 0.0) == 0.0

    def test_value(self):
        assert localization_length_analytic(1.0, 0.3) == pytest.approx(ASINH_0075, rel=1e-14)

    @given(st.floats(1e-6, 0.05), st.floats(0.1, 10))
    def test_small_gamma(self, ratio, t):
        g = ratio * t
        assert localization_length_analytic(t, g) / (g / (4 * t)) == pytest.approx(1.0, rel=1e-3)
