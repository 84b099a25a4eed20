import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import straight_beam_geometry
from femselect.fem import GlobalSystem, assemble
from femselect.modal import (
    RIGID_BODY_RATIO,
    ConvergenceError,
    DecompositionError,
    EigenSolveConfig,
    EigenSolveError,
    ModalResult,
    StructureError,
    frequencies_from_eigenvalues,
    generalized_eigenvalues,
    natural_frequencies,
    rigid_body_count,
    select_modes,
    solve_generalized_eigen,
)

BETA_L = np.array([4.7300407, 7.8532046, 10.9956078])


@pytest.fixture(scope="module")
def h_system(geometry, material, section, nominal_moduli):
    return assemble(geometry, nominal_moduli, material, section)


def random_spd_pair(rng, n):
    a = rng.normal(size=(n, n))
    k = a @ a.T + 0.1 * np.eye(n)
    b = rng.normal(size=(n, n))
    m = b @ b.T + n * np.eye(n)
    return k, m


class TestRigidBodyCount:
    def test_six_small_eigenvalues(self):
        eig = np.array([1e-9, 2e-9, 3e-9, 4e-9, 5e-9, 6e-9, 100.0, 200.0])
        assert rigid_body_count(eig) == 6

    def test_no_small_eigenvalues(self):
        assert rigid_body_count(np.linspace(1.0, 10.0, 20)) == 0

    def test_short_spectrum_counts_zero(self):
        assert rigid_body_count(np.zeros(6)) == 0

    def test_threshold_is_relative_to_seventh(self):
        eig = np.array([0.9e-6, 1.1e-6, 2e-6, 3e-6, 4e-6, 5e-6, 1.0, 2.0])
        # threshold = 1e-6 * 1.0, strict comparison
        assert rigid_body_count(eig) == 1

    def test_scale_invariance(self):
        eig = np.array([1e-12] * 6 + [1.0] * 10)
        assert rigid_body_count(eig) == rigid_body_count(eig * 1e8) == 6


class TestSolver:
    def test_matches_general_driver_on_random_pairs(self):
        rng = np.random.default_rng(11)
        for n in (4, 9, 16):
            k, m = random_spd_pair(rng, n)
            eigenvalues, _ = solve_generalized_eigen(k, m)
            reference = np.sort(scipy.linalg.eig(k, m, right=False).real)
            np.testing.assert_allclose(eigenvalues, reference, rtol=1e-8, atol=1e-10)

    def test_mass_orthonormal_vectors(self):
        rng = np.random.default_rng(5)
        k, m = random_spd_pair(rng, 12)
        _, vectors = solve_generalized_eigen(k, m)
        np.testing.assert_allclose(vectors.T @ m @ vectors, np.eye(12), atol=1e-10)

    def test_eigenvalues_ascend(self):
        rng = np.random.default_rng(2)
        k, m = random_spd_pair(rng, 20)
        eigenvalues, _ = solve_generalized_eigen(k, m)
        assert np.all(np.diff(eigenvalues) >= 0.0)

    def test_residual_contract_on_h_system(self, h_system):
        eigenvalues, vectors = solve_generalized_eigen(h_system.k_global, h_system.m_global)
        n_rigid = rigid_body_count(eigenvalues)
        assert n_rigid == 6
        k, m = h_system.k_global, h_system.m_global
        k_norm = np.linalg.norm(k, 2)
        for i in range(len(eigenvalues)):
            k_phi = k @ vectors[:, i]
            if i < n_rigid:
                assert np.linalg.norm(k_phi) <= 1e-9 * k_norm * np.linalg.norm(vectors[:, i])
            else:
                residual = k_phi - eigenvalues[i] * (m @ vectors[:, i])
                assert np.linalg.norm(residual) <= 1e-9 * np.linalg.norm(k_phi)

    def test_fast_path_matches_full_solve(self, h_system):
        full, _ = solve_generalized_eigen(h_system.k_global, h_system.m_global)
        fast = generalized_eigenvalues(h_system.k_global, h_system.m_global)
        # elastic eigenvalues agree tightly; the rigid cluster is roundoff
        # noise in both drivers, so only its magnitude is checked
        np.testing.assert_allclose(fast[6:], full[6:], rtol=1e-10)
        assert np.all(np.abs(fast[:6]) < RIGID_BODY_RATIO * full[6])
        assert np.all(np.abs(full[:6]) < RIGID_BODY_RATIO * full[6])

    def test_rejects_indefinite_mass(self):
        k = np.eye(4)
        m = np.diag([1.0, 1.0, -1.0, 1.0])
        with pytest.raises(DecompositionError):
            solve_generalized_eigen(k, m)
        with pytest.raises(EigenSolveError):
            solve_generalized_eigen(k, np.zeros((4, 4)))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            solve_generalized_eigen(np.eye(3), np.eye(4))
        with pytest.raises(ValueError):
            solve_generalized_eigen(np.ones(3), np.ones(3))

    def test_convergence_error_carries_achieved_ratio(self):
        err = ConvergenceError("residual too large", achieved=3.2e-7)
        assert err.achieved == 3.2e-7
        assert isinstance(err, EigenSolveError)

    @settings(max_examples=25)
    @given(seed=st.integers(0, 10_000), n=st.integers(3, 12))
    def test_property_random_pairs_satisfy_contract(self, seed, n):
        rng = np.random.default_rng(seed)
        k, m = random_spd_pair(rng, n)
        eigenvalues, vectors = solve_generalized_eigen(k, m)
        assert eigenvalues.shape == (n,)
        assert vectors.shape == (n, n)
        residual = k @ vectors - (m @ vectors) * eigenvalues
        k_phi_norm = np.linalg.norm(k @ vectors, axis=0)
        assert np.all(np.linalg.norm(residual, axis=0) <= 1e-9 * k_phi_norm)


class TestFrequencies:
    def test_mapping(self):
        eig = np.array([(2 * np.pi * 10.0) ** 2, (2 * np.pi * 2.5) ** 2])
        np.testing.assert_allclose(frequencies_from_eigenvalues(eig), [10.0, 2.5])

    def test_roundoff_negatives_clamp_to_zero(self):
        np.testing.assert_array_equal(
            frequencies_from_eigenvalues(np.array([-1e-8, 0.0])), [0.0, 0.0]
        )


class TestNaturalFrequencies:
    def test_straight_beam_matches_analytical_bending(self, material, section):
        geometry = straight_beam_geometry()
        system = assemble(geometry, np.full(12, 7.2e10), material, section)
        result = natural_frequencies(system, with_shapes=True)
        assert result.rigid_body_count == 6

        # pick out the modes deflecting along global y, the compliant plane
        soft = []
        for i in range(6, len(result.frequencies_hz)):
            translations = result.mode_shapes[:, i].reshape(-1, 6)[:, :3]
            fraction = np.sum(translations[:, 1] ** 2) / np.sum(translations**2)
            if fraction > 0.99:
                soft.append(result.frequencies_hz[i])

        analytic = (
            BETA_L**2
            / (2 * np.pi * 1.2**2)
            * np.sqrt(7.2e10 * section.i_strong / (material.density * section.area))
        )
        np.testing.assert_allclose(soft[:3], analytic, rtol=0.01)

    def test_h_beam_has_six_rigid_modes(self, h_system):
        result = natural_frequencies(h_system)
        assert result.rigid_body_count == 6
        assert result.mode_shapes is None
        np.testing.assert_allclose(result.frequencies_hz[:6], 0.0, atol=1e-2)
        assert np.all(np.diff(result.frequencies_hz) >= 0.0)

    def test_h_beam_nominal_spectrum_regression(self, h_system, measured):
        result = natural_frequencies(h_system)
        selected = select_modes(result, measured)
        np.testing.assert_allclose(
            selected,
            [56.138239, 127.310193, 224.763536, 264.171059, 455.196343],
            rtol=1e-6,
        )

    def test_shapes_returned_on_request(self, h_system):
        result = natural_frequencies(h_system, with_shapes=True)
        assert result.mode_shapes is not None
        assert result.mode_shapes.shape == (78, 78)

    def test_constrained_system_is_rejected(self, h_system):
        # shifting K by alpha*M moves every eigenvalue up by alpha, which
        # destroys the rigid-body cluster
        shifted = GlobalSystem(
            k_global=h_system.k_global + 1e6 * h_system.m_global,
            m_global=h_system.m_global,
            dof_map=h_system.dof_map,
        )
        with pytest.raises(StructureError):
            natural_frequencies(shifted)


class TestSelectModes:
    def test_picks_measured_ranks(self, measured):
        result = ModalResult(
            frequencies_hz=np.arange(1.0, 21.0), rigid_body_count=6
        )
        np.testing.assert_array_equal(
            select_modes(result, measured), [7.0, 8.0, 10.0, 11.0, 13.0]
        )

    def test_requires_enough_modes(self, measured):
        result = ModalResult(frequencies_hz=np.arange(1.0, 13.0), rigid_body_count=6)
        with pytest.raises(ValueError):
            select_modes(result, measured)

    def test_requires_free_free_cluster(self, measured):
        result = ModalResult(frequencies_hz=np.arange(1.0, 21.0), rigid_body_count=5)
        with pytest.raises(ValueError):
            select_modes(result, measured)


class TestConfig:
    def test_defaults(self):
        config = EigenSolveConfig()
        assert config.residual_tolerance == 1e-9
        assert config.max_iterations == 100

    def test_validation(self):
        with pytest.raises(ValueError):
            EigenSolveConfig(residual_tolerance=0.0)
        with pytest.raises(ValueError):
            EigenSolveConfig(max_iterations=0)

    def test_ratio_constant(self):
        assert RIGID_BODY_RATIO == 1e-6
