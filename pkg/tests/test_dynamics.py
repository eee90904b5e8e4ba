import numpy as np
import pytest

from rotorlab import (
    GaugeError,
    GridState,
    PhysicsParams,
    QuasiEigenstate,
    band_energy,
    check_amplitude_action,
    check_density_current,
    check_standard,
    energy_flow_rate,
    evolve_analytic,
    evolve_stepped,
    make_grid,
    spectral_derivative,
    stationarity_check,
    to_torque_gauge,
)
from rotorlab.dynamics import (
    energy_expectation,
    global_phase,
    iter_stepped,
    quasi_eigenstate_grid,
    trajectory,
)


def hamiltonian_eigenvalue(n, k0, params, grid):
    """Apply (hbar/i d/dtheta + k)^2 / 2m to sampled e^{i n theta} and read off the ratio."""
    u = np.exp(1j * n * grid.nodes)
    pu = -1j * params.hbar * spectral_derivative(u, grid) + k0 * u
    hu = (-1j * params.hbar * spectral_derivative(pu, grid) + k0 * pu) / (2 * params.inertia)
    return np.mean(hu / u).real


class TestBandEnergy:
    @pytest.mark.parametrize("n, k0, expected", [(0, 0.0, 0.0), (1, 0.0, 0.5), (0, 0.5, 0.125)])
    def test_examples(self, n, k0, expected):
        params = PhysicsParams()
        assert band_energy(n, k0, params) == pytest.approx(expected, abs=1e-16)
        assert hamiltonian_eigenvalue(n, k0, params, make_grid(16)) == pytest.approx(expected, abs=1e-13)

    def test_rescaling(self):
        # energies scale as hbar^2 / m at fixed k0/hbar
        for hbar, m in [(2.0, 1.0), (0.5, 3.0), (1.7, 0.2)]:
            p = PhysicsParams(hbar=hbar, inertia=m)
            for n, c in [(1, 0.0), (-2, 0.3), (3, 0.77)]:
                assert band_energy(n, c * hbar, p) == pytest.approx(hbar**2 / m * band_energy(n, c), rel=1e-14)
                assert hamiltonian_eigenvalue(n, c * hbar, p, make_grid(16)) == pytest.approx(
                    band_energy(n, c * hbar, p), rel=1e-12
                )


class TestEvolveAnalytic:
    def test_unit_torque(self):
        q = evolve_analytic(QuasiEigenstate(0, 0.0), PhysicsParams(torque=1.0), 1.0)
        assert q.k0 == 1.0
        assert q.accumulated_phase == pytest.approx(-1 / 6, abs=1e-15)
        assert q.time == 1.0

    def test_zero_torque(self):
        params = PhysicsParams()
        q0 = QuasiEigenstate(2, 0.3, 0.5j, 1.0)
        q = evolve_analytic(q0, params, 5.0)
        assert q.k0 == 0.3
        assert q.amplitude == 0.5j
        assert q.accumulated_phase == pytest.approx(1.0 - band_energy(2, 0.3) * 5.0)

    def test_energy_dips_then_rises(self):
        params = PhysicsParams(torque=1.0)
        q = QuasiEigenstate(1, -1.5)
        ts = np.linspace(0, 1, 101)
        energies = [band_energy(1, evolve_analytic(q, params, t).k0, params) for t in ts]
        i = int(np.argmin(energies))
        assert ts[i] == pytest.approx(0.5)
        assert evolve_analytic(q, params, ts[i]).k0 == pytest.approx(-1.0)
        assert np.all(np.diff(energies[: i + 1]) < 0) and np.all(np.diff(energies[i:]) > 0)

    def test_composition(self):
        params = PhysicsParams(hbar=1.3, inertia=0.7, torque=-0.4)
        q = QuasiEigenstate(2, 0.1, 1.0, 0.3)
        a = evolve_analytic(evolve_analytic(q, params, 0.4), params, 0.9)
        b = evolve_analytic(q, params, 1.3)
        assert a.k0 == pytest.approx(b.k0, abs=1e-15)
        assert a.accumulated_phase == pytest.approx(b.accumulated_phase, abs=1e-13)

    def test_phase_is_integral_of_energy(self):
        from scipy.integrate import quad

        params = PhysicsParams(hbar=0.8, inertia=1.5, torque=0.6)
        q = QuasiEigenstate(-1, 0.25)
        t = 2.3
        exact, _ = quad(lambda s: band_energy(-1, 0.25 + 0.6 * s, params), 0, t)
        assert evolve_analytic(q, params, t).accumulated_phase == pytest.approx(-exact / 0.8, rel=1e-12)


class TestEvolveStepped:
    def test_matches_closed_form(self):
        params = PhysicsParams(torque=1.0)
        grid = make_grid(64)
        start = quasi_eigenstate_grid(QuasiEigenstate(0, 0.0), grid, params)
        end = evolve_stepped(start, params, 1e-3, 1000)
        assert end.k == 1.0
        assert abs(global_phase(start, end) - (-1 / 6)) <= 1e-6

    def test_second_order(self):
        params = PhysicsParams(torque=1.0)
        grid = make_grid(32)
        start = quasi_eigenstate_grid(QuasiEigenstate(0, 0.0), grid, params)
        errs = []
        for dt, steps in [(1e-2, 100), (5e-3, 200)]:
            errs.append(abs(global_phase(start, evolve_stepped(start, params, dt, steps)) + 1 / 6))
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)

    def test_zero_torque_conserves(self):
        params = PhysicsParams()
        grid = make_grid(32)
        start = quasi_eigenstate_grid(QuasiEigenstate(2, 0.3, 0.7), grid, params)
        e0 = energy_expectation(start, params)
        for state in iter_stepped(start, params, 1e-2, 2000):
            pass
        assert abs(energy_expectation(state, params) - e0) <= 1e-10
        assert np.max(np.abs(np.abs(state.samples) ** 2 - np.abs(start.samples) ** 2)) <= 1e-12

    def test_momentum_gauge_only(self):
        grid = make_grid(16)
        psi = to_torque_gauge(GridState(np.ones(16), grid), 0.2)
        with pytest.raises(GaugeError):
            evolve_stepped(psi, PhysicsParams(), 0.1, 1)
        with pytest.raises(GaugeError):
            evolve_stepped(psi, PhysicsParams(), 0.1, 0)
        with pytest.raises(ValueError):
            evolve_stepped(GridState(np.ones(16), grid), PhysicsParams(), 0.0, 1)

    def test_band_index_invariant(self):
        params = PhysicsParams(torque=2.5)
        grid = make_grid(32)
        start = quasi_eigenstate_grid(QuasiEigenstate(3, -0.2), grid, params)
        end = evolve_stepped(start, params, 1e-2, 300)
        spectrum = np.abs(np.fft.fft(end.samples)) / 32
        assert int(np.argmax(spectrum)) == 3
        assert np.sum(spectrum) - spectrum[3] < 1e-13

    def test_twisted_superposition_against_closed_form(self):
        # two bands on a twisted lattice: each mode picks up its own closed-form phase
        params = PhysicsParams(hbar=1.0, inertia=1.2, torque=0.7)
        grid = make_grid(32)
        theta = grid.nodes
        q = 0.3
        u = GridState((np.exp(1j * theta) + 0.5) * np.exp(1j * q * theta), grid, "momentum", k=0.1, twist=q)
        end = evolve_stepped(u, params, 1e-3, 500)
        expected = 0
        for n, a in [(1, 1.0), (0, 0.5)]:
            mode = evolve_analytic(QuasiEigenstate(n, q + 0.1, a), params, 0.5)
            expected = expected + mode.amplitude * np.exp(1j * mode.accumulated_phase) * np.exp(1j * (n + q) * theta)
        assert np.max(np.abs(end.samples - expected)) < 1e-6


class TestEnergyFlow:
    def test_examples(self):
        assert energy_flow_rate(QuasiEigenstate(0, 1.0), PhysicsParams(torque=1.0)) == 1.0
        assert energy_flow_rate(QuasiEigenstate(3, 0.4), PhysicsParams()) == 0.0
        assert energy_flow_rate(QuasiEigenstate(1, -1.0), PhysicsParams(torque=2.0)) == 0.0

    def test_finite_difference_of_measured_energy(self):
        params = PhysicsParams(torque=1.0)
        grid = make_grid(32)
        q = QuasiEigenstate(0, 0.9)
        dt = 1e-3
        states = list(iter_stepped(quasi_eigenstate_grid(q, grid, params), params, dt, 200))
        energies = [energy_expectation(s, params) for s in states]
        # states[99] sits at t = 0.1, where k0 = 1.0
        rate = (energies[100] - energies[98]) / (2 * dt)
        assert rate == pytest.approx(energy_flow_rate(evolve_analytic(q, params, 0.1), params), rel=1e-6)
        assert rate == pytest.approx(1.0, rel=1e-6)


class TestStationarity:
    def test_quasi_eigenstate(self):
        params = PhysicsParams(torque=1.0)
        grid = make_grid(64)
        start = quasi_eigenstate_grid(QuasiEigenstate(1, 0.2), grid, params)
        end = evolve_stepped(start, params, 1e-3, 1000)
        report = stationarity_check(start, end, params)
        assert report.passed
        assert report.momentum_change == pytest.approx(1.0, abs=1e-8)

    def test_zero_torque(self):
        params = PhysicsParams()
        grid = make_grid(16)
        start = quasi_eigenstate_grid(QuasiEigenstate(0, 0.0), grid, params)
        assert stationarity_check(start, evolve_stepped(start, params, 0.1, 10), params).passed

    def test_two_band_superposition_beats(self):
        params = PhysicsParams(torque=1.0)
        grid = make_grid(64)
        theta = grid.nodes
        start = GridState(1 + np.exp(1j * theta), grid, "momentum", k=0.0)
        end = evolve_stepped(start, params, 1e-3, 1000)
        report = stationarity_check(start, end, params)
        assert not report.passed
        # closed form: rho = 2 + 2 cos(theta + relative phase)
        e0 = evolve_analytic(QuasiEigenstate(0, 0.0), params, 1.0).accumulated_phase
        e1 = evolve_analytic(QuasiEigenstate(1, 0.0), params, 1.0).accumulated_phase
        expected = 2 + 2 * np.cos(theta + e1 - e0)
        np.testing.assert_allclose(np.abs(end.samples) ** 2, expected, atol=1e-6)


class TestGaugeConsistencyOverTime:
    def test_torque_view_fails_standard_only(self):
        params = PhysicsParams(torque=0.37)
        grid = make_grid(32)
        start = quasi_eigenstate_grid(QuasiEigenstate(1, 0.0), grid, params)
        for i, state in enumerate(iter_stepped(start, params, 1e-2, 100), start=1):
            psi = to_torque_gauge(state)
            assert check_amplitude_action(psi, params).passed
            assert check_density_current(psi, params).passed
            integer = abs(state.k - round(state.k)) <= 1e-10
            assert check_standard(psi, params).passed == integer
            assert check_standard(state, params).passed


def test_trajectory_rows():
    params = PhysicsParams(torque=1.0)
    rows, max_err = trajectory(QuasiEigenstate(0, 0.0), params, make_grid(32), 1e-3, 1000, every=100)
    assert len(rows) == 11
    t, k0, energy, phase, rho_wrap, current = rows[-1]
    assert (t, k0) == (1.0, 1.0)
    assert energy == pytest.approx(0.5, abs=1e-12)
    assert phase == pytest.approx(-1 / 6, abs=1e-6)
    assert rho_wrap <= 1e-12
    assert current == pytest.approx(1.0, abs=1e-12)
    assert max_err < 1e-7
