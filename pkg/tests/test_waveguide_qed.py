import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiral_skin.dispersion import branch_at
from chiral_skin.errors import DispersionSingularity, InvalidParams, TruncationTooSmall
from chiral_skin.waveguide_qed import (
    ModelParams,
    TwoExcitationState,
    fold_even,
    fold_momentum,
    fullline_coordinates,
    pair_basis,
    polariton_dispersion,
    relative_hamiltonian_fullline,
    relative_hamiltonian_halfline,
    scattering_continuum,
    single_excitation_hamiltonian,
    two_excitation_hamiltonian,
)

PHI = 0.35 * np.pi


class TestModelParams:
    def test_rates_at_xi_07(self):
        p = ModelParams(phi=PHI, xi=0.7)
        assert p.gamma_fwd == pytest.approx(1.1764705882352942, abs=1e-15)
        assert p.gamma_bwd == pytest.approx(0.8235294117647058, abs=1e-15)

    @given(st.floats(1e-6, 1.0), st.floats(0.01, 10.0))
    def test_rate_identity(self, xi, g):
        p = ModelParams(phi=PHI, xi=xi, gamma1d=g)
        assert p.gamma_fwd + p.gamma_bwd == pytest.approx(2 * g, rel=1e-14)

    def test_theta(self):
        assert ModelParams(phi=PHI, xi=0.1).theta == pytest.approx(9 / 11)

    @pytest.mark.parametrize("kw", [{"phi": 0.0, "xi": 0.5}, {"phi": PHI, "xi": 1.5},
                                    {"phi": PHI, "xi": 0.0}, {"phi": PHI, "xi": 0.5, "gamma1d": -1},
                                    {"phi": PHI, "xi": 0.5, "n_atoms": 0}])
    def test_invalid(self, kw):
        with pytest.raises(InvalidParams):
            ModelParams(**kw)


class TestSingleExcitation:
    def test_diagonal(self):
        p = ModelParams(phi=PHI, xi=0.7, omega0=0.3, n_atoms=6)
        np.testing.assert_allclose(np.diag(single_excitation_hamiltonian(p)), 0.3 - 1j)

    def test_nonchiral_symmetric(self):
        p = ModelParams(phi=PHI, xi=1.0, n_atoms=8)
        h = single_excitation_hamiltonian(p)
        assert np.array_equal(h, h.T)
        m, n = np.indices(h.shape)
        off = m != n
        np.testing.assert_allclose(h[off], (-1j * np.exp(1j * PHI * np.abs(m - n)))[off])

    def test_chiral_asymmetric(self):
        h = single_excitation_hamiltonian(ModelParams(phi=PHI, xi=0.7, n_atoms=8))
        assert np.abs(h - h.T).max() > 0

    def test_orientation(self):
        # gamma_fwd sits below the diagonal (m > n)
        p = ModelParams(phi=PHI, xi=0.5, n_atoms=3)
        h = single_excitation_hamiltonian(p)
        assert h[1, 0] == pytest.approx(-1j * p.gamma_fwd * np.exp(1j * PHI))
        assert h[0, 1] == pytest.approx(-1j * p.gamma_bwd * np.exp(1j * PHI))


class TestTwoExcitation:
    def test_two_atoms(self):
        p = ModelParams(phi=PHI, xi=0.7, n_atoms=2, omega0=0.4)
        h = two_excitation_hamiltonian(p)
        assert h.shape == (1, 1)
        assert h[0, 0] == pytest.approx(0.8 - 2j)

    def test_dimension_and_basis(self):
        p = ModelParams(phi=PHI, xi=0.7, n_atoms=7)
        m, n = pair_basis(7)
        assert two_excitation_hamiltonian(p).shape == (21, 21)
        assert np.all(m < n)

    def test_trace_identity(self):
        h = two_excitation_hamiltonian(ModelParams(phi=PHI, xi=0.7, n_atoms=12))
        assert abs(np.linalg.eigvals(h).sum() - np.trace(h)) <= 1e-10 * h.shape[0]

    def test_matches_bosonic_construction(self):
        # oracle: project H1 (x) 1 + 1 (x) H1 onto symmetric states without double occupancy
        n = 5
        p = ModelParams(phi=PHI, xi=0.6, n_atoms=n)
        h1 = single_excitation_hamiltonian(p)
        big = np.kron(h1, np.eye(n)) + np.kron(np.eye(n), h1)
        m, k = pair_basis(n)
        proj = np.zeros((n * n, m.size))
        for j, (a, b) in enumerate(zip(m, k)):
            proj[a * n + b, j] = proj[b * n + a, j] = 1 / np.sqrt(2)
        np.testing.assert_allclose(proj.T @ big @ proj, two_excitation_hamiltonian(p), atol=1e-13)

    def test_state_normalization(self):
        v = np.arange(1, 11, dtype=complex)
        s = TwoExcitationState.from_vector(5, v)
        assert np.sum(np.abs(s.amplitudes) ** 2) == pytest.approx(0.5)
        full = s.full_matrix()
        assert np.linalg.norm(full) == pytest.approx(1.0)
        assert np.array_equal(full, full.T)
        assert np.all(np.diag(full) == 0)

    def test_state_wrong_length(self):
        with pytest.raises(InvalidParams):
            TwoExcitationState.from_vector(5, np.ones(9))


class TestRelativeHamiltonians:
    def test_halfline_corner(self):
        # the r = r' = 1 "eta = -1" term gives -2i gamma on top of the e^{2 i phi} term
        p = ModelParams(phi=PHI, xi=0.7)
        h = relative_hamiltonian_halfline(p, 0.0, 5)
        expected = -1j * (p.gamma_fwd + p.gamma_bwd) - 1j * (p.gamma_fwd + p.gamma_bwd) * np.exp(2j * PHI)
        assert h[0, 0] == pytest.approx(expected)

    def test_fullline_nonchiral_form(self):
        p = ModelParams(phi=PHI, xi=1.0)
        K = 0.7
        r_max = 6
        h = relative_hamiltonian_fullline(p, K, r_max)
        r = fullline_coordinates(r_max)
        rr, ss = np.meshgrid(r, r, indexing="ij")
        np.testing.assert_allclose(h, -1j * np.cos(K * (rr - ss) / 2) * np.exp(1j * PHI * np.abs(rr - ss)), atol=1e-14)
        np.testing.assert_allclose(h, h.T, atol=1e-15)

    def test_fullline_k0(self):
        p = ModelParams(phi=PHI, xi=0.6)
        r = fullline_coordinates(4)
        rr, ss = np.meshgrid(r, r, indexing="ij")
        np.testing.assert_allclose(relative_hamiltonian_fullline(p, 0.0, 4),
                                   -1j * np.exp(1j * PHI * np.abs(rr - ss)), atol=1e-14)

    def test_fullline_excludes_origin(self):
        assert 0 not in fullline_coordinates(5)
        assert fullline_coordinates(5).size == 10

    @pytest.mark.parametrize("xi,K", [(1.0, np.pi), (0.7, 0.9 * np.pi), (1.0, 0.9 * np.pi), (0.7, np.pi)])
    def test_folded_fullline_equals_halfline(self, xi, K):
        p = ModelParams(phi=PHI, xi=xi)
        r_max = 60
        half = relative_hamiltonian_halfline(p, K, r_max)
        folded = fold_even(relative_hamiltonian_fullline(p, K, r_max), r_max)
        np.testing.assert_allclose(2 * folded, half, atol=1e-13)

    @pytest.mark.parametrize("xi,K", [(1.0, np.pi), (0.7, 0.9 * np.pi)])
    def test_bound_energy_in_both_spectra(self, xi, K):
        p = ModelParams(phi=PHI, xi=xi)
        r_max = 200
        e = branch_at(p, [K], r_max)[0]
        full = np.linalg.eigvals(relative_hamiltonian_fullline(p, K, r_max))
        assert np.min(np.abs(full - e)) <= 1e-8

    def test_truncation_guard(self):
        with pytest.raises(TruncationTooSmall):
            relative_hamiltonian_halfline(ModelParams(phi=PHI, xi=1.0), np.pi, 1)

    def test_most_bound_reality_improves(self):
        p = ModelParams(phi=PHI, xi=1.0)
        ims = []
        for r_max in (50, 200):
            w = np.linalg.eigvals(relative_hamiltonian_halfline(p, np.pi, r_max)) / 2
            ims.append(abs(w[np.argmin(np.abs(w - 2 / np.tan(2 * PHI)))].imag))
        assert ims[1] <= ims[0] + 1e-14
        assert ims[1] < 1e-10


class TestPolaritons:
    def test_direct_value(self):
        assert polariton_dispersion(ModelParams(phi=np.pi / 2, xi=1.0), 0.0) == pytest.approx(1.0)

    @given(st.floats(-np.pi, np.pi))
    def test_nonchiral_mirror(self, k):
        p = ModelParams(phi=PHI, xi=1.0)
        if abs(np.cos(k) - np.cos(PHI)) < 1e-3:
            return
        assert polariton_dispersion(p, k) == pytest.approx(polariton_dispersion(p, -k), rel=1e-12)

    def test_chiral_asymmetry(self):
        p = ModelParams(phi=PHI, xi=0.1)
        k = np.array([0.5, 1.5, 2.5])
        assert np.all(np.abs(polariton_dispersion(p, k) - polariton_dispersion(p, -k)) > 0.1)

    def test_singularity_guard(self):
        with pytest.raises(DispersionSingularity):
            polariton_dispersion(ModelParams(phi=PHI, xi=1.0), PHI)

    def test_fold(self):
        assert fold_momentum(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
        assert fold_momentum(-np.pi) == pytest.approx(np.pi)


class TestContinuum:
    def test_nonchiral_k_minus_k(self):
        p = ModelParams(phi=PHI, xi=1.0)
        a = scattering_continuum(p, 0.8)
        b = scattering_continuum(p, -0.8)
        assert len(a.intervals) == len(b.intervals)
        np.testing.assert_allclose(a.intervals, b.intervals, rtol=1e-9, atol=1e-9)

    def test_bound_energy_outside(self):
        p = ModelParams(phi=PHI, xi=0.7)
        e = branch_at(p, [np.pi], 200)[0]
        c = scattering_continuum(p, np.pi)
        assert not c.contains(e)
        assert c.distance(e) > 0

    def test_kinds_present(self):
        c = scattering_continuum(ModelParams(phi=PHI, xi=0.7), 0.5)
        assert set(c.by_kind) == {"upper-upper", "upper-lower", "lower-lower"}
        assert all(lo <= hi for lo, hi in c.intervals)

    @settings(max_examples=10, deadline=None)
    @given(st.floats(-np.pi, np.pi), st.floats(0.2, 1.0))
    def test_samples_inside(self, K, xi):
        p = ModelParams(phi=PHI, xi=xi)
        c = scattering_continuum(p, K, 400)
        q = np.linspace(-np.pi, np.pi, 37)
        for qq in q:
            d1 = np.cos(qq) - np.cos(PHI)
            d2 = np.cos(K - qq) - np.cos(PHI)
            if min(abs(d1), abs(d2)) < 0.05:
                continue
            e = 0.5 * (polariton_dispersion(p, qq) + polariton_dispersion(p, K - qq))
            assert c.contains(e, margin=1e-6 * max(1, abs(e))) or c.distance(e) < 0.05 * max(1, abs(e))

    def test_too_few_samples(self):
        with pytest.raises(InvalidParams):
            scattering_continuum(ModelParams(phi=PHI, xi=1.0), 0.0, 10)
