import math

import numpy as np
import pytest

from qdrabi import (
    Detunings,
    DynamicsSpec,
    IntegrationDivergedError,
    ManifoldAmplitudes,
    ManifoldIndex,
    TimeGrid,
    excited_population,
    integrate,
    jc_baseline,
    nl_block_baseline,
    rhs,
)


def make_spec(g_a=1.0, g_b=1.0, g_nl=0.0, delta_a=0.0, delta_b=0.0, lam=0.0,
              m=0, n=0, y0=None, t_end=20.0, step=1e-3, sample_every=10):
    if y0 is None:
        y0 = ManifoldAmplitudes.unit("d")
    dressing = math.exp(-0.5 * lam)
    return DynamicsSpec(
        index=ManifoldIndex(m, n),
        g_a_eff=g_a * dressing,
        g_b_eff=g_b * dressing,
        g_nl=g_nl,
        detunings=Detunings(delta_a, delta_b),
        y0=y0,
        grid=TimeGrid(0.0, t_end, step, sample_every),
    )


def complex_rhs(t, y, spec):
    """Independent re-derivation of the equations of motion in complex form.

    The six amplitudes obey (K = sqrt((n+1)(m+1)(m+2)), Ga = g_a_eff*sqrt(m+1),
    Gb = g_b_eff*sqrt(n+1)):

        i dA/dt = gnl K B                 i dB/dt = gnl K A
        i dC/dt = Gb e^{-i db t} D + gnl K E
        i dD/dt = Ga e^{+i da t} F + Gb e^{+i db t} C
        i dE/dt = gnl K C                 i dF/dt = Ga e^{-i da t} D
    """
    m, n = spec.index.m, spec.index.n
    big_k = spec.g_nl * math.sqrt((n + 1) * (m + 1) * (m + 2))
    ga = spec.g_a_eff * math.sqrt(m + 1)
    gb = spec.g_b_eff * math.sqrt(n + 1)
    da, db = spec.detunings.delta_a, spec.detunings.delta_b
    a, b, c, d, e, f = (complex(y[2 * k], y[2 * k + 1]) for k in range(6))
    da_phase = complex(math.cos(da * t), math.sin(da * t))
    db_phase = complex(math.cos(db * t), math.sin(db * t))
    dot = [
        -1j * big_k * b,
        -1j * big_k * a,
        -1j * (gb * db_phase.conjugate() * d + big_k * e),
        -1j * (ga * da_phase * f + gb * db_phase * c),
        -1j * big_k * c,
        -1j * ga * da_phase.conjugate() * d,
    ]
    out = []
    for z in dot:
        out += [z.real, z.imag]
    return np.array(out)


class TestRhs:
    def test_zero_couplings_give_zero_derivative(self):
        spec = make_spec(g_a=0.0, g_b=0.0, g_nl=0.0, delta_a=1.3, delta_b=0.7)
        state = ManifoldAmplitudes(*np.linspace(-1, 1, 12))
        assert rhs(2.7, state, spec).as_tuple() == (0.0,) * 12

    def test_excited_state_feeds_only_f(self):
        # t=0, only the g_a channel open: cos(0)=1 collapses everything to f2' = -g_a*d1
        spec = make_spec(g_a=1.0, g_b=0.0, g_nl=0.0)
        deriv = rhs(0.0, ManifoldAmplitudes.unit("d"), spec)
        expected = [0.0] * 12
        expected[11] = -1.0
        assert list(deriv.as_tuple()) == expected

    def test_matches_independent_complex_form(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            spec = make_spec(
                g_a=rng.uniform(0, 2), g_b=rng.uniform(0, 2), g_nl=rng.uniform(0, 2),
                delta_a=rng.uniform(-2, 2), delta_b=rng.uniform(-2, 2),
                lam=rng.uniform(0, 1), m=int(rng.integers(0, 3)), n=int(rng.integers(0, 3)),
            )
            y = rng.normal(size=12)
            y /= np.linalg.norm(y)
            t = rng.uniform(0, 30)
            got = np.array(rhs(t, ManifoldAmplitudes.from_array(y), spec).as_tuple())
            want = complex_rhs(t, y, spec)
            np.testing.assert_allclose(got, want, rtol=1e-15, atol=1e-15)

    def test_nonlinear_block_decoupled_from_exciton_block(self):
        # columns of the (linear) generator: rhs applied to unit vectors
        rng = np.random.default_rng(3)
        spec = make_spec(g_a=1.1, g_b=0.7, g_nl=1.9, delta_a=0.4, delta_b=1.2)
        for k in range(12):
            basis_vec = np.zeros(12)
            basis_vec[k] = 1.0
            col = np.array(rhs(rng.uniform(0, 10),
                               ManifoldAmplitudes.from_array(basis_vec), spec).as_tuple())
            if k < 4:
                assert not col[4:].any()
            else:
                assert not col[:4].any()


class TestIntegrate:
    def test_zero_couplings_constant(self):
        y0 = ManifoldAmplitudes(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2)
        spec = make_spec(g_a=0, g_b=0, g_nl=0, delta_a=1.0, delta_b=0.5, y0=y0, t_end=5.0)
        series = integrate(spec)
        assert np.array_equal(series.amplitudes, np.tile(y0.as_array(), (len(series), 1)))

    def test_resonant_rabi_is_cos_squared(self):
        spec = make_spec(g_a=1.0, g_b=0.0, g_nl=0.0, t_end=20.0)
        series = integrate(spec)
        np.testing.assert_allclose(series.p2, np.cos(series.t) ** 2, atol=1e-10)

    def test_norm_conserved(self):
        spec = make_spec(g_a=1.0, g_b=1.0, g_nl=2.0, delta_a=1.0, delta_b=0.1, lam=0.01)
        assert integrate(spec).max_norm_drift() < 1e-12

    def test_time_reversal_returns_to_start(self):
        spec = make_spec(g_a=1.0, g_b=1.0, g_nl=2.0, delta_a=1.0, delta_b=0.1, lam=0.01)
        forward = integrate(spec)
        back_spec = DynamicsSpec(
            index=spec.index, g_a_eff=spec.g_a_eff, g_b_eff=spec.g_b_eff, g_nl=spec.g_nl,
            detunings=spec.detunings,
            y0=ManifoldAmplitudes.from_array(forward.amplitudes[-1]),
            grid=TimeGrid(20.0, 0.0, -1e-3, 10),
        )
        returned = integrate(back_spec).amplitudes[-1]
        np.testing.assert_allclose(returned, spec.y0.as_array(), atol=1e-8)

    def test_lambda_irrelevant_without_exciton_coupling(self):
        # nonlinear terms are undressed, so trajectories must be bit-identical
        y0 = ManifoldAmplitudes.unit("b")
        runs = [
            integrate(make_spec(g_a=0.0, g_b=0.0, g_nl=1.3, lam=lam, y0=y0, t_end=10.0))
            for lam in (0.0, 5.0)
        ]
        assert np.array_equal(runs[0].amplitudes, runs[1].amplitudes)

    def test_divergence_reports_last_good_time(self):
        spec = make_spec(g_nl=10.0, g_a=0.0, g_b=0.0, t_end=100_000.0, step=100.0,
                         sample_every=1, y0=ManifoldAmplitudes.unit("b"))
        with pytest.raises(IntegrationDivergedError) as err:
            integrate(spec)
        assert err.value.t_last >= 0.0
        assert err.value.t_last < 100_000.0

    def test_sampling_includes_endpoints(self):
        spec = make_spec(t_end=1.0, step=1e-3, sample_every=7)
        series = integrate(spec)
        assert series.t[0] == 0.0
        assert series.t[-1] == pytest.approx(1.0, abs=1e-12)


class TestExcitedPopulation:
    def test_unit_excited(self):
        assert excited_population(ManifoldAmplitudes.unit("d")) == 1.0

    def test_zero(self):
        assert excited_population(ManifoldAmplitudes.unit("a")) == 0.0

    def test_complex_amplitude(self):
        y = ManifoldAmplitudes(d1=0.6, d2=0.8)
        assert excited_population(y) == pytest.approx(1.0, abs=1e-15)

    def test_array_input(self):
        arr = np.zeros(12)
        arr[6], arr[7] = 0.6, 0.8
        assert excited_population(arr) == pytest.approx(1.0, abs=1e-15)


class TestJcBaseline:
    def test_resonant_limit(self):
        t = np.linspace(0, 10, 400)
        np.testing.assert_allclose(jc_baseline(t, g=1.0), np.cos(t) ** 2, atol=1e-14)

    def test_unity_at_time_zero(self):
        assert jc_baseline(0.0, g=2.3, lam=0.4, delta=1.7, m=2) == pytest.approx(1.0)

    def test_detuned_minimum(self):
        # min P2 = delta^2/(delta^2 + 4 g^2) = 0.2 for delta = g = 1
        t = np.linspace(0, 20, 20001)
        assert jc_baseline(t, g=1.0, delta=1.0).min() == pytest.approx(0.2, abs=1e-6)

    def test_matches_integration(self):
        spec = make_spec(g_a=0.9, g_b=0.0, g_nl=0.0, delta_a=0.7, lam=0.3)
        series = integrate(spec)
        np.testing.assert_allclose(
            series.p2, jc_baseline(series.t, g=0.9, lam=0.3, delta=0.7), atol=1e-8)

    def test_zero_coupling_stays_excited(self):
        np.testing.assert_array_equal(jc_baseline(np.linspace(0, 5, 10), g=0.0), 1.0)


class TestNlBlockBaseline:
    def test_zero_coupling_constant(self):
        np.testing.assert_array_equal(nl_block_baseline(np.linspace(0, 5, 10), 0.0), 1.0)

    def test_vacuum_block_frequency(self):
        t = np.linspace(0, 10, 500)
        np.testing.assert_allclose(
            nl_block_baseline(t, 1.0), np.cos(math.sqrt(2.0) * t) ** 2, atol=1e-14)

    def test_matches_integration_for_excited_photon_numbers(self):
        # m=1, n=2: Omega = 0.5*sqrt(3*2*3) = 0.5*sqrt(18)
        spec = make_spec(g_a=0.0, g_b=0.0, g_nl=0.5, m=1, n=2,
                         y0=ManifoldAmplitudes.unit("b"), t_end=20.0)
        series = integrate(spec)
        pb = series.amplitudes[:, 2] ** 2 + series.amplitudes[:, 3] ** 2
        np.testing.assert_allclose(pb, nl_block_baseline(series.t, 0.5, m=1, n=2), atol=1e-8)
        np.testing.assert_allclose(
            pb, np.cos(0.5 * math.sqrt(18.0) * series.t) ** 2, atol=1e-8)


class TestValidation:
    def test_grid_rejects_zero_step(self):
        with pytest.raises(ValueError):
            TimeGrid(0.0, 1.0, 0.0, 1)

    def test_grid_rejects_inconsistent_direction(self):
        with pytest.raises(ValueError):
            TimeGrid(0.0, -1.0, 1e-3, 1)

    def test_spec_rejects_zero_initial_norm(self):
        with pytest.raises(ValueError):
            make_spec(y0=ManifoldAmplitudes())

    def test_manifold_index_rejects_negative(self):
        with pytest.raises(ValueError):
            ManifoldIndex(-1, 0)

    def test_unit_slot_validation(self):
        with pytest.raises(ValueError):
            ManifoldAmplitudes.unit("z")
