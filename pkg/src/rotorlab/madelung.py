"""Amplitude/action split ``psi = A exp(i S / hbar)`` and the two real field equations.

Writing the Schroedinger equation for real ``A`` and ``S`` gives

    -(hbar^2/2m) A'' + A (S' + k)^2 / 2m - V A + A S_t = 0      (real part)
    2 A' (S' + k) + A S'' + 2 m A_t = 0                         (imaginary part)

where ``k`` is the momentum parameter (momentum gauge only, zero otherwise) and
``V = T*theta`` is present only in the torque gauge.  Only derivatives of ``S``
appear, which is why continuity of ``A``, ``A'`` and ``S'`` suffices at a
boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import (
    AMPLITUDE_THRESHOLD,
    DEFAULT_PARAMS,
    AngleGrid,
    GaugeTag,
    GridState,
    PhaseUndefinedError,
    PhysicsParams,
    make_grid,
    spectral_derivative,
)


@dataclass(frozen=True, eq=False)
class MadelungFields:
    """Real fields of a grid state.

    ``action`` is unwrapped along the grid starting at ``theta = -pi`` and is
    not periodic in general; ``action_theta`` is.  The time derivatives are
    supplied by the caller (zero for a snapshot without further information).
    """

    grid: AngleGrid
    amplitude: np.ndarray
    action: np.ndarray
    action_theta: np.ndarray
    dS_dt: np.ndarray | float = 0.0
    dA_dt: np.ndarray | float = 0.0
    gauge: GaugeTag = GaugeTag.MOMENTUM
    k: float = 0.0
    twist: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gauge", GaugeTag.parse(self.gauge))
        if np.any(np.asarray(self.amplitude) < 0):
            raise ValueError("amplitude must be non-negative")

    def with_rates(self, dS_dt=None, dA_dt=None) -> "MadelungFields":
        return replace(
            self,
            dS_dt=self.dS_dt if dS_dt is None else dS_dt,
            dA_dt=self.dA_dt if dA_dt is None else dA_dt,
        )


def _require_amplitude(samples):
    amp = np.abs(samples)
    if np.any(amp < AMPLITUDE_THRESHOLD):
        bad = int(np.argmin(amp))
        raise PhaseUndefinedError(
            f"amplitude {amp[bad]:.3e} below {AMPLITUDE_THRESHOLD:g} at node {bad}; phase undefined"
        )
    return amp


def _phase_gradient(state: GridState) -> np.ndarray:
    # d(arg p)/dtheta = Im(p'/p) holds pointwise for the continuous phase, so
    # the gradient of the unwrapped action comes from the spectral derivative
    # of the band-limited periodic part, not from the (non band-limited) phase.
    p = state.periodic_part
    dp = spectral_derivative(p, state.grid)
    return state.twist + np.imag(np.conj(p) * dp) / np.abs(p) ** 2


def decompose(state: GridState, hbar: float = 1.0, dS_dt=0.0, dA_dt=0.0) -> MadelungFields:
    """Split a grid state into amplitude and unwrapped action.

    Requires the true phase increment between neighbouring nodes to stay
    below pi, i.e. ``N > 2*|mu|`` for the largest exponent present.

    Raises
    ------
    PhaseUndefinedError
        If the amplitude vanishes (below 1e-12) at any node.
    """
    amp = _require_amplitude(state.samples)
    phase = np.unwrap(np.angle(state.samples))
    if phase[0] <= -np.pi:  # anchor in (-pi, pi]
        phase = phase + 2.0 * np.pi
    action = hbar * phase
    action_theta = hbar * _phase_gradient(state)
    return MadelungFields(
        state.grid, amp, action, action_theta, dS_dt, dA_dt,
        state.gauge, state.k, state.twist,
    )


def _momentum_shift(fields: MadelungFields, gauge: GaugeTag) -> float:
    return fields.k if gauge is GaugeTag.MOMENTUM else 0.0


def residual_eq1(fields: MadelungFields, params: PhysicsParams = DEFAULT_PARAMS, gauge=None) -> np.ndarray:
    """Pointwise residual of the real-part equation.

    The ``-T*theta*A`` term uses the node coordinate in ``[-pi, pi)`` and is
    only present in the torque gauge.
    """
    gauge = fields.gauge if gauge is None else GaugeTag.parse(gauge)
    hbar, m = params.hbar, params.inertia
    amp = fields.amplitude
    amp_tt = spectral_derivative(amp, fields.grid, order=2)
    grad = fields.action_theta + _momentum_shift(fields, gauge)
    res = -(hbar**2 / (2.0 * m)) * amp_tt + amp * grad**2 / (2.0 * m) + amp * fields.dS_dt
    if gauge is GaugeTag.TORQUE:
        res = res - params.torque * fields.grid.nodes * amp
    return res


def residual_eq2(fields: MadelungFields, params: PhysicsParams = DEFAULT_PARAMS) -> np.ndarray:
    """Pointwise residual ``2 A' (S' + k) + A S'' + 2 m A_t`` of the imaginary-part equation."""
    amp = fields.amplitude
    amp_t = spectral_derivative(amp, fields.grid)
    action_tt = spectral_derivative(fields.action_theta, fields.grid)
    grad = fields.action_theta + _momentum_shift(fields, fields.gauge)
    return 2.0 * amp_t * grad + amp * action_tt + 2.0 * params.inertia * fields.dA_dt


def reconstruct(fields: MadelungFields, params: PhysicsParams = DEFAULT_PARAMS) -> GridState:
    samples = fields.amplitude * np.exp(1j * fields.action / params.hbar)
    return GridState(samples, fields.grid, fields.gauge, fields.k, twist=fields.twist)


def complex_momentum_density(state, grid: AngleGrid | None = None, hbar: float = 1.0) -> np.ndarray:
    """``conj(psi) * psi_theta``.

    Its real part is ``A A'`` and its imaginary part ``A^2 S'/hbar`` wherever
    ``A > 0``, so seam continuity of this one complex field carries the same
    information as the ``(A, A', S')`` triple.
    """
    if isinstance(state, GridState):
        return np.conj(state.samples) * state.derivative()
    grid = grid or make_grid(8)
    psi, dpsi = state.evaluate(grid.nodes, hbar)
    return np.conj(psi) * dpsi


def finite_difference_rates(earlier: GridState, later: GridState, hbar: float = 1.0):
    """Central-difference ``(dA/dt, dS/dt)`` at the midpoint time of two snapshots.

    Both snapshots must share grid and gauge; the phase difference is taken on
    the nearest branch pointwise.
    """
    if earlier.gauge is not later.gauge:
        raise ValueError("snapshots are in different gauges")
    dt = later.time - earlier.time
    if dt <= 0:
        raise ValueError("later snapshot must have a larger time")
    _require_amplitude(earlier.samples)
    _require_amplitude(later.samples)
    dA = (np.abs(later.samples) - np.abs(earlier.samples)) / dt
    dS = hbar * np.angle(later.samples * np.conj(earlier.samples)) / dt
    return dA, dS
