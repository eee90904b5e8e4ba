"""Torque-driven evolution of the rotator.

All stepping happens in the momentum gauge, where the Hamiltonian
``(-i*hbar*d/dtheta + k)^2 / 2m`` is diagonal in Fourier space and the
potential has no seam discontinuity.  Torque-gauge views come from
:func:`rotorlab.gauge.to_torque_gauge`.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .boundary import DEFAULT_TOLERANCE, check_density_current
from .core import (
    DEFAULT_PARAMS,
    AngleGrid,
    GaugeError,
    GaugeTag,
    GridState,
    PhysicsParams,
    current_from_derivative,
)
from .gauge import advance_k, momentum_expectation, to_torque_gauge


@dataclass(frozen=True)
class QuasiEigenstate:
    """``a * exp(i*gamma) * exp(i*(n + k0/hbar)*theta)`` in the torque gauge.

    ``accumulated_phase`` is ``gamma``, kept unwrapped.
    """

    n: int = 0
    k0: float = 0.0
    amplitude: complex = 1.0
    accumulated_phase: float = 0.0
    time: float = 0.0

    def momentum(self, hbar: float = 1.0) -> float:
        return self.n * hbar + self.k0


def band_energy(n: int, k0: float, params: PhysicsParams = DEFAULT_PARAMS) -> float:
    return (n * params.hbar + k0) ** 2 / (2.0 * params.inertia)


def evolve_analytic(q: QuasiEigenstate, params: PhysicsParams, t_final: float) -> QuasiEigenstate:
    """Closed-form evolution over an interval of length ``t_final``.

    ``k0`` grows linearly with the torque and the phase drops by the time
    integral of the band energy, a cubic in ``t_final``.
    """
    T, t = params.torque, t_final
    p0 = q.momentum(params.hbar)
    # integral of (p0 + T t')^2 over [0, t]
    integral = p0 * p0 * t + p0 * T * t * t + T * T * t**3 / 3.0
    dphase = -integral / (2.0 * params.inertia * params.hbar)
    return replace(
        q,
        k0=advance_k(q.k0, params, t),
        accumulated_phase=q.accumulated_phase + dphase,
        time=q.time + t,
    )


def quasi_eigenstate_grid(q: QuasiEigenstate, grid: AngleGrid, params: PhysicsParams = DEFAULT_PARAMS,
                          gauge=GaugeTag.MOMENTUM) -> GridState:
    """Sample a quasi-eigenstate; the momentum-gauge view is ``a e^{i gamma} e^{i n theta}`` with ``k = k0``."""
    a = complex(q.amplitude) * np.exp(1j * q.accumulated_phase)
    u = GridState(a * np.exp(1j * q.n * grid.nodes), grid, GaugeTag.MOMENTUM, q.k0, q.time, twist=float(q.n))
    if GaugeTag.parse(gauge) is GaugeTag.TORQUE:
        return to_torque_gauge(u, hbar=params.hbar)
    return u


def quasi_action_rate(q: QuasiEigenstate, params: PhysicsParams, theta, gauge=GaugeTag.TORQUE) -> np.ndarray:
    """Analytic ``dS/dt`` of a quasi-eigenstate.

    Torque gauge: ``T*theta - E``; momentum gauge: ``-E``.
    """
    theta = np.asarray(theta, dtype=float)
    rate = np.full(theta.shape, -band_energy(q.n, q.k0, params))
    if GaugeTag.parse(gauge) is GaugeTag.TORQUE:
        rate = rate + params.torque * theta
    return rate


def _require_momentum(state):
    if state.gauge is not GaugeTag.MOMENTUM:
        raise GaugeError("stepped evolution runs in the momentum gauge")


def _mode_momenta(state: GridState, hbar: float) -> np.ndarray:
    return hbar * (state.grid.wavenumbers + state.twist)


def iter_stepped(state: GridState, params: PhysicsParams, dt: float, steps: int):
    """Yield the state after each of ``steps`` propagator steps.

    Each step multiplies every Fourier mode by ``exp(-i E(k_mid) dt / hbar)``
    with ``k_mid`` the exact midpoint value of ``k``.  Mode phases are
    accumulated as real numbers and ``k`` and ``t`` are recomputed from the
    step count, so neither drifts by repeated addition.
    """
    _require_momentum(state)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    grid = state.grid
    coeffs = np.fft.fft(state.periodic_part)
    momenta = _mode_momenta(state, params.hbar)
    carrier = np.exp(1j * state.twist * grid.nodes)
    phase = np.zeros(grid.n_samples)
    scale = dt / (2.0 * params.inertia * params.hbar)
    for i in range(steps):
        k_mid = advance_k(state.k, params, (i + 0.5) * dt)
        phase -= (momenta + k_mid) ** 2 * scale
        elapsed = (i + 1) * dt
        samples = carrier * np.fft.ifft(coeffs * np.exp(1j * phase))
        yield replace(
            state,
            samples=samples,
            k=advance_k(state.k, params, elapsed),
            time=state.time + elapsed,
        )


def evolve_stepped(state: GridState, params: PhysicsParams, dt: float, steps: int) -> GridState:
    out = state
    for out in iter_stepped(state, params, dt, steps):
        pass
    if out is state:
        _require_momentum(state)
    return out


def energy_expectation(state: GridState, params: PhysicsParams = DEFAULT_PARAMS) -> float:
    """``<H>`` of a momentum-gauge state, evaluated mode by mode."""
    _require_momentum(state)
    coeffs = np.fft.fft(state.periodic_part)
    weights = np.abs(coeffs) ** 2
    energies = (_mode_momenta(state, params.hbar) + state.k) ** 2 / (2.0 * params.inertia)
    return float(np.sum(weights * energies) / np.sum(weights))


def global_phase(reference: GridState, state: GridState) -> float:
    """Phase of ``<reference|state>``, in ``(-pi, pi]``."""
    return float(np.angle(np.vdot(reference.samples, state.samples)))


def energy_flow_rate(q: QuasiEigenstate, params: PhysicsParams = DEFAULT_PARAMS) -> float:
    """Power delivered by the torque, ``T * (n*hbar + k0) / m``."""
    return params.torque * q.momentum(params.hbar) / params.inertia


@dataclass(frozen=True)
class StationarityReport:
    density_change: float
    momentum_change: float
    expected_momentum_change: float
    passed: bool


def stationarity_check(before: GridState, after: GridState, params: PhysicsParams,
                       rho_tol: float = 1e-12, momentum_tol: float = 1e-8) -> StationarityReport:
    """Density unchanged while ``<p>`` moves by ``T * elapsed``."""
    drho = float(np.max(np.abs(np.abs(after.samples) ** 2 - np.abs(before.samples) ** 2)))
    dp = momentum_expectation(after, params) - momentum_expectation(before, params)
    expected = params.torque * (after.time - before.time)
    ok = drho <= rho_tol and abs(dp - expected) <= momentum_tol
    return StationarityReport(drho, dp, expected, ok)


TRAJECTORY_COLUMNS = ("t", "k0", "energy", "phase", "rho_wrap", "current")


def trajectory(q: QuasiEigenstate, params: PhysicsParams, grid: AngleGrid, dt: float, steps: int,
               every: int = 1, tolerance: float = DEFAULT_TOLERANCE):
    """Stepped trajectory rows plus the largest phase error against the closed form.

    Rows follow :data:`TRAJECTORY_COLUMNS`.  The phase column is the measured
    global phase relative to the start, unwrapped along the run and offset by
    the initial accumulated phase.  ``rho_wrap`` and ``current`` are taken on
    the torque-gauge view at the seam.
    """
    if every < 1:
        raise ValueError("every must be at least 1")
    start = quasi_eigenstate_grid(q, grid, params)
    rows = [_row(start, q.accumulated_phase, params, tolerance)]
    max_err = 0.0
    prev_raw, offset = 0.0, q.accumulated_phase
    for i, state in enumerate(iter_stepped(start, params, dt, steps), start=1):
        raw = global_phase(start, state)
        jump = raw - prev_raw
        offset += jump - 2.0 * np.pi * np.rint(jump / (2.0 * np.pi))
        prev_raw = raw
        exact = evolve_analytic(q, params, i * dt).accumulated_phase
        max_err = max(max_err, abs(offset - exact))
        if i % every == 0 or i == steps:
            rows.append(_row(state, offset, params, tolerance))
    return rows, max_err


def _row(state, phase, params, tolerance):
    torque_view = to_torque_gauge(state, hbar=params.hbar)
    report = check_density_current(torque_view, params, tolerance)
    psi, dpsi = torque_view.evaluate(np.array([-np.pi]), params.hbar)
    current = float(current_from_derivative(psi, dpsi, torque_view, params)[0])
    return (
        state.time,
        state.k,
        energy_expectation(state, params),
        phase,
        report.residuals["rho"],
        current,
    )
