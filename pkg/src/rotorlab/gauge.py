"""Momentum-gauge / torque-gauge bookkeeping.

The two gauges are related by ``psi = u * exp(i*k*theta/hbar)``.  The momentum
parameter ``k`` travels with every state, so neither transform needs outside
context.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import (
    DEFAULT_PARAMS,
    GaugeError,
    GaugeTag,
    GridState,
    PhysicsParams,
    PlaneWaveState,
)


@dataclass(frozen=True, eq=False)
class ActionRecord:
    """Action split into the gauge-local phase ``phi`` and the ``k*theta`` term."""

    phi: np.ndarray
    k_term: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.phi + self.k_term


def _require(state, gauge: GaugeTag):
    if state.gauge is not gauge:
        raise GaugeError(f"expected a {gauge.value}-gauge state, got {state.gauge.value}")


def _phase_factor(grid, k, hbar, sign):
    return np.exp(sign * 1j * (k / hbar) * grid.nodes)


def to_torque_gauge(state, k: float | None = None, hbar: float = 1.0):
    """Multiply a momentum-gauge state by ``exp(i*k*theta/hbar)``.

    ``k`` defaults to the momentum parameter already carried by the state.
    """
    _require(state, GaugeTag.MOMENTUM)
    k = state.k if k is None else float(k)
    if isinstance(state, PlaneWaveState):
        return replace(state, k=k, gauge=GaugeTag.TORQUE)
    factor = _phase_factor(state.grid, k, hbar, +1)
    return replace(
        state,
        samples=state.samples * factor,
        gauge=GaugeTag.TORQUE,
        k=k,
        twist=state.twist + k / hbar,
    )


def to_momentum_gauge(state, k: float | None = None, hbar: float = 1.0):
    """Inverse of :func:`to_torque_gauge`."""
    _require(state, GaugeTag.TORQUE)
    k = state.k if k is None else float(k)
    if isinstance(state, PlaneWaveState):
        return replace(state, k=k, gauge=GaugeTag.MOMENTUM)
    factor = _phase_factor(state.grid, k, hbar, -1)
    return replace(
        state,
        samples=state.samples * factor,
        gauge=GaugeTag.MOMENTUM,
        k=k,
        twist=state.twist - k / hbar,
    )


def advance_k(k: float, params: PhysicsParams, dt: float) -> float:
    """Exact integral of ``dk/dt = T`` for constant torque."""
    return k + params.torque * dt


def canonical_momentum_apply(state, params: PhysicsParams = DEFAULT_PARAMS):
    """Apply ``-i*hbar*d/dtheta + k`` (momentum gauge) or ``-i*hbar*d/dtheta`` (torque gauge).

    A plane wave comes back as a plane wave with its amplitude multiplied by
    the momentum eigenvalue.  Grid states come back as grid states.
    """
    if isinstance(state, PlaneWaveState):
        eigenvalue = state.physical_momentum(params.hbar)
        return replace(state, amplitude=state.amplitude * eigenvalue)
    out = -1j * params.hbar * state.derivative()
    if state.gauge is GaugeTag.MOMENTUM:
        out = out + state.k * state.samples
    return state.with_samples(out)


def momentum_expectation(state: GridState, params: PhysicsParams = DEFAULT_PARAMS) -> float:
    """``<psi|P|psi> / <psi|psi>`` on the grid."""
    applied = canonical_momentum_apply(state, params).samples
    num = np.vdot(state.samples, applied)
    return float(num.real / np.vdot(state.samples, state.samples).real)


def action_record(state: GridState, hbar: float = 1.0) -> ActionRecord:
    """Split the unwrapped action of ``state`` into ``phi`` and ``k*theta``."""
    from .madelung import decompose

    total = decompose(state, hbar=hbar).action
    if state.gauge is GaugeTag.TORQUE:
        k_term = state.k * state.grid.nodes
    else:
        k_term = np.zeros_like(total)
    return ActionRecord(total - k_term, k_term)
