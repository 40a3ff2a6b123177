import math

import numpy as np
import pytest

from qdrabi import (
    ConfigError,
    GridMismatchError,
    ManifoldAmplitudes,
    ManifoldIndex,
    ModelParams,
    build_hamiltonian,
    compare,
    integrate,
    preset_config,
    propagate,
    run_oracle,
    to_interaction_picture,
)
from qdrabi.oracle import basis_index, basis_states, default_cutoffs, manifold_states


def params(g_a=0.0, g_b=0.0, g_nl=0.0, delta_a=1.0, delta_b=0.1, lam=0.0):
    return ModelParams.from_detunings(g_a, g_b, g_nl, delta_a, delta_b, lam)


class TestBasis:
    def test_enumeration_is_total_and_ordered(self):
        states = basis_states(2, 1)
        assert len(states) == 2 * 3 * 2
        assert [s.s for s in states[:6]] == [1] * 6
        assert [(s.m, s.n) for s in states[:6]] == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
        for i, state in enumerate(states):
            assert basis_index(state.s, state.m, state.n, 2, 1) == i

    def test_manifold_matches_amplitude_order(self):
        six = manifold_states(ManifoldIndex(1, 2))
        assert [(s.s, s.m, s.n) for s in six] == [
            (2, 3, 2), (2, 1, 3), (1, 1, 3), (2, 1, 2), (1, 3, 2), (1, 2, 2)]


class TestBuildHamiltonian:
    def test_zero_couplings_diagonal(self):
        p = ModelParams(omega_a=0.9, omega_ex=1.9, g_a=0, g_b=0, g_nl=0, shift=0.2)
        ham = build_hamiltonian(p, 4, 3).matrix
        assert not np.abs(ham - np.diag(np.diag(ham))).any()
        # |1,m,n> -> omega_a*m + omega_b*n; |2,m,n> adds the shifted exciton level
        assert ham[basis_index(1, 2, 1, 4, 3)][basis_index(1, 2, 1, 4, 3)] == \
            pytest.approx(0.9 * 2 + 1.8, rel=1e-15)
        assert ham[basis_index(2, 0, 0, 4, 3)][basis_index(2, 0, 0, 4, 3)] == \
            pytest.approx(1.9 - 0.2, rel=1e-15)

    def test_restricted_nonlinear_pairs(self):
        # with only g_nl, the vacuum manifold carries exactly one coupled
        # pair per dot level, |s,0,1> <-> |s,2,0>, each with element
        # g_nl*sqrt((0+1)(0+1)(0+2))
        p = params(g_nl=1.7)
        ham = build_hamiltonian(p, 2, 1, mode="restricted").matrix
        off = ham - np.diag(np.diag(ham))
        for s in (1, 2):
            i = basis_index(s, 0, 1, 2, 1)
            j = basis_index(s, 2, 0, 2, 1)
            assert off[i, j] == pytest.approx(1.7 * math.sqrt(2.0), rel=1e-15)
            off[i, j] = off[j, i] = 0.0
        assert not np.abs(off).any()

    def test_full_mode_is_exactly_hermitian(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            p = params(*rng.uniform(0, 2, 5), lam=rng.uniform(0, 1))
            ham = build_hamiltonian(p, 5, 4).matrix
            assert np.array_equal(ham, ham.conj().T)

    def test_restricted_mode_is_exactly_hermitian(self):
        p = params(g_a=1.2, g_b=0.5, g_nl=0.8)
        ham = build_hamiltonian(p, 4, 3, mode="restricted").matrix
        assert np.array_equal(ham, ham.conj().T)

    def test_cutoff_must_contain_manifold(self):
        with pytest.raises(ConfigError, match="manifold"):
            build_hamiltonian(params(), 1, 1, mode="restricted")

    def test_full_mode_needs_headroom(self):
        with pytest.raises(ConfigError, match="headroom"):
            build_hamiltonian(params(), 2, 1, mode="full")

    def test_full_mode_cutoff_cap(self):
        with pytest.raises(ConfigError, match="capped"):
            build_hamiltonian(params(), 17, 3, mode="full")

    def test_unknown_mode_rejected(self):
        with pytest.raises(ConfigError):
            build_hamiltonian(params(), 3, 2, mode="exact")

    def test_default_cutoffs(self):
        assert default_cutoffs(ManifoldIndex(0, 0), "restricted") == (2, 1)
        assert default_cutoffs(ManifoldIndex(0, 0), "full") == (4, 3)
        assert default_cutoffs(ManifoldIndex(2, 1), "full") == (6, 4)


class TestPropagate:
    def test_zero_hamiltonian_freezes_state(self):
        psi0 = np.array([0.6, 0.8j, 0.0])
        psi_t = propagate(np.zeros((3, 3)), psi0, [0.0, 1.0, 5.0])
        np.testing.assert_allclose(psi_t, np.tile(psi0, (3, 1)), atol=1e-15)

    def test_diagonal_hamiltonian_rotates_phases(self):
        energies = np.array([0.0, 1.5, -0.7])
        psi0 = np.ones(3) / math.sqrt(3.0)
        times = np.array([0.0, 0.9, 2.4])
        psi_t = propagate(np.diag(energies), psi0, times)
        expected = np.exp(-1j * np.outer(times, energies)) * psi0
        np.testing.assert_allclose(psi_t, expected, atol=1e-12)

    def test_two_level_resonant_oscillation(self):
        g = 0.8
        ham = np.array([[0.0, g], [g, 0.0]])
        times = np.linspace(0, 10, 101)
        psi_t = propagate(ham, np.array([1.0, 0.0]), times)
        np.testing.assert_allclose(np.abs(psi_t[:, 0]) ** 2, np.cos(g * times) ** 2, atol=1e-12)

    def test_unitarity(self):
        rng = np.random.default_rng(5)
        mat = rng.normal(size=(40, 40)) + 1j * rng.normal(size=(40, 40))
        ham = mat + mat.conj().T
        psi0 = rng.normal(size=40) + 1j * rng.normal(size=40)
        psi0 /= np.linalg.norm(psi0)
        psi_t = propagate(ham, psi0, np.linspace(0, 50, 60))
        norms = np.linalg.norm(psi_t, axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)


class TestInteractionPicture:
    def test_identity_at_time_zero(self):
        p = params(g_a=1.0, g_b=0.5, g_nl=2.0)
        psi = np.arange(12, dtype=complex).reshape(1, 12)
        out = to_interaction_picture(psi, [0.0], p, 2, 1)
        np.testing.assert_array_equal(out, psi)

    def test_free_evolution_gives_constant_amplitudes(self):
        p = params(g_a=0.0, g_b=0.0, g_nl=0.0, delta_a=1.3, delta_b=0.4)
        times = np.linspace(0, 15, 40)
        result = run_oracle(p, times)
        np.testing.assert_allclose(
            result.amplitudes, np.tile(result.amplitudes[0], (40, 1)), atol=1e-12)


class TestOracleAgainstIntegrator:
    def test_restricted_matches_ode_on_fig3(self):
        cfg = preset_config("fig3")
        series = integrate(cfg.to_dynamics_spec())
        result = run_oracle(cfg.to_model_params(), series.t)
        assert compare(result, series) < 1e-8

    def test_restricted_matches_ode_off_vacuum_manifold(self):
        cfg = preset_config("fig3")
        index = ManifoldIndex(1, 1)
        spec = cfg.to_dynamics_spec()
        from dataclasses import replace
        spec = replace(spec, index=index)
        series = integrate(spec)
        result = run_oracle(cfg.to_model_params(), series.t, index=index)
        assert compare(result, series) < 1e-8

    def test_full_mode_reports_leakage_without_failing(self):
        cfg = preset_config("fig3")
        series = integrate(cfg.to_dynamics_spec(step=1e-2))
        result = run_oracle(cfg.to_model_params(), series.t, mode="full")
        assert result.max_leakage() > 0.0
        assert np.all(result.leakage >= -1e-12)
        # restricted mode keeps everything inside the manifold
        restricted = run_oracle(cfg.to_model_params(), series.t, mode="restricted")
        assert restricted.max_leakage() < 1e-12


class TestCompare:
    def test_identical_series_deviate_by_zero(self):
        cfg = preset_config("fig3")
        series = integrate(cfg.to_dynamics_spec(step=1e-2))
        result = run_oracle(cfg.to_model_params(), series.t)
        result.amplitudes = series.amplitudes.copy()
        assert compare(result, series) == 0.0

    def test_single_entry_perturbation_is_measured(self):
        cfg = preset_config("fig3")
        series = integrate(cfg.to_dynamics_spec(step=1e-2))
        result = run_oracle(cfg.to_model_params(), series.t)
        result.amplitudes = series.amplitudes.copy()
        result.amplitudes[17, 3] += 1e-6
        assert compare(result, series) == pytest.approx(1e-6, rel=1e-9)

    def test_grid_mismatch_rejected(self):
        cfg = preset_config("fig3")
        series = integrate(cfg.to_dynamics_spec(step=1e-2))
        result = run_oracle(cfg.to_model_params(), series.t[:-1])
        with pytest.raises(GridMismatchError):
            compare(result, series)


class TestInitialStates:
    def test_oracle_accepts_manifold_superposition(self):
        cfg = preset_config("fig3")
        y0 = ManifoldAmplitudes(c1=0.6, d2=0.8)
        from dataclasses import replace
        spec = replace(cfg.to_dynamics_spec(step=1e-3), y0=y0)
        series = integrate(spec)
        result = run_oracle(cfg.to_model_params(), series.t, y0=y0)
        assert compare(result, series) < 1e-8
