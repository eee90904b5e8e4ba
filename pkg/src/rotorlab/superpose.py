"""Finite superpositions of momentum eigenfunctions and the lattice admissibility rule.

A superposition ``sum_j a_j exp(i k_j theta / hbar)`` has a 2*pi-periodic
density only when every pair of momenta differs by an integer multiple of
``hbar``.  Admissible superpositions then fold into a single offset ``k0`` and
integer band indices ``n`` with ``k_j = n*hbar + k0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundary import DEFAULT_TOLERANCE
from .core import (
    DEFAULT_PARAMS,
    AngleGrid,
    GaugeTag,
    GridState,
    ObservableFields,
    PhysicsParams,
    current_from_derivative,
)

LATTICE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RawSuperposition:
    """Zero-torque superposition of plane waves.

    ``momenta`` are physical momenta ``k_j`` (action units).  At zero torque
    the gauge parameter is zero and both gauges coincide, so the state reports
    itself as a momentum-gauge state with ``k = 0``.
    """

    momenta: tuple
    coefficients: tuple
    gauge = GaugeTag.MOMENTUM
    k = 0.0

    def __post_init__(self):
        momenta = tuple(float(x) for x in self.momenta)
        coefficients = tuple(complex(c) for c in self.coefficients)
        if len(momenta) != len(coefficients):
            raise ValueError(
                f"{len(momenta)} momenta but {len(coefficients)} coefficients"
            )
        if not momenta:
            raise ValueError("superposition needs at least one term")
        if not any(c != 0 for c in coefficients):
            raise ValueError("superposition needs a nonzero coefficient")
        if len(set(momenta)) != len(momenta):
            raise ValueError("momenta must be pairwise distinct")
        object.__setattr__(self, "momenta", momenta)
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def from_k_over_hbar(cls, values, coefficients=None, hbar: float = 1.0):
        values = list(values)
        if coefficients is None:
            coefficients = [1.0] * len(values)
        return cls(tuple(v * hbar for v in values), tuple(coefficients))

    def evaluate(self, theta, hbar: float = 1.0):
        theta = np.asarray(theta, dtype=float)
        k = np.asarray(self.momenta) / hbar
        a = np.asarray(self.coefficients)
        waves = np.exp(1j * np.multiply.outer(theta, k)) * a
        return waves.sum(axis=-1), (waves * (1j * k)).sum(axis=-1)

    def reflected(self) -> "RawSuperposition":
        return RawSuperposition(tuple(-k for k in self.momenta), self.coefficients)

    def shifted(self, dk: float) -> "RawSuperposition":
        return RawSuperposition(tuple(k + dk for k in self.momenta), self.coefficients)


@dataclass(frozen=True)
class BlochDecomposition:
    """``k_j = n_j*hbar + k0`` with ``k0/hbar`` in ``[0, 1)``."""

    k0: float
    bands: tuple  # ((n, a_n), ...)
    hbar: float = 1.0
    admissible = True

    def momenta(self) -> tuple:
        return tuple(n * self.hbar + self.k0 for n, _ in self.bands)

    def to_grid_state(self, grid: AngleGrid, gauge_k: float = 0.0) -> GridState:
        """Momentum-gauge samples ``u = sum_n a_n exp(i (n + k0/hbar) theta)``."""
        theta = grid.nodes
        periodic = np.zeros(grid.n_samples, dtype=complex)
        for n, a in self.bands:
            periodic += a * np.exp(1j * n * theta)
        q = self.k0 / self.hbar
        return GridState(periodic * np.exp(1j * q * theta), grid, GaugeTag.MOMENTUM, gauge_k, twist=q)


@dataclass(frozen=True)
class LatticeViolation:
    """Worst pair of momenta whose difference is not an integer multiple of hbar."""

    pair: tuple  # (index_i, index_j)
    defect: float  # distance of k_i - k_j from the nearest multiple of hbar, action units
    admissible = False


def _fractional_defect(diff_over_hbar):
    return np.abs(diff_over_hbar - np.rint(diff_over_hbar))


def lattice_check(s: RawSuperposition, params: PhysicsParams = DEFAULT_PARAMS, tolerance: float = LATTICE_TOLERANCE):
    """Admissibility by the lattice rule.

    Differences are measured from the first term only; integer spacing then
    holds for every pair by transitivity.  Returns a
    :class:`BlochDecomposition` or a :class:`LatticeViolation`; neither is an
    error.  ``tolerance`` is in units of hbar.
    """
    hbar = params.hbar
    k = np.asarray(s.momenta)
    diffs = (k - k[0]) / hbar
    defects = _fractional_defect(diffs)
    worst = int(np.argmax(defects))
    if defects[worst] > tolerance:
        return LatticeViolation((0, worst), float(defects[worst] * hbar))
    k0 = float(np.mod(k[0], hbar))
    if k0 >= hbar:  # mod can round up to hbar itself
        k0 = 0.0
    shift = np.rint((k[0] - k0) / hbar)
    bands = tuple(
        (int(shift + np.rint(d)), a) for d, a in zip(diffs, s.coefficients)
    )
    return BlochDecomposition(k0, bands, hbar)


def density_double_sum(s: RawSuperposition, theta, hbar: float = 1.0) -> np.ndarray:
    """``rho`` from the explicit double sum over term pairs."""
    theta = np.asarray(theta, dtype=float)
    k = np.asarray(s.momenta) / hbar
    a = np.asarray(s.coefficients)
    rho = np.zeros(theta.shape, dtype=complex)
    for j in range(len(k)):
        for l in range(len(k)):
            rho = rho + a[j] * np.conj(a[l]) * np.exp(1j * (k[j] - k[l]) * theta)
    return rho.real


def density_of(s: RawSuperposition, grid: AngleGrid, params: PhysicsParams = DEFAULT_PARAMS) -> ObservableFields:
    """Density, density gradient and current of ``s`` at the grid nodes.

    The density is computed by direct sampling and cross-checked against the
    pairwise double sum.
    """
    psi, dpsi = s.evaluate(grid.nodes, params.hbar)
    rho = np.abs(psi) ** 2
    scale = max(1.0, sum(abs(a) for a in s.coefficients) ** 2)
    drift = np.max(np.abs(rho - density_double_sum(s, grid.nodes, params.hbar)))
    if drift > 1e-12 * scale:
        raise ArithmeticError(f"density cross-check drifted by {drift:.3e}")
    rho_theta = 2.0 * np.real(np.conj(psi) * dpsi)
    return ObservableFields(rho, rho_theta, current_from_derivative(psi, dpsi, s, params))


@dataclass(frozen=True)
class OracleVerdict:
    """Largest wrap mismatch of ``rho``, ``rho_theta``, ``J`` over all grid nodes."""

    residuals: dict
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", all(r <= self.tolerance for r in self.residuals.values()))


def admissibility_oracle(
    s: RawSuperposition,
    params: PhysicsParams = DEFAULT_PARAMS,
    grid: AngleGrid | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> OracleVerdict:
    """Brute-force periodicity test of the gauge-invariant fields.

    Compares ``rho``, ``rho_theta`` and ``J`` at every node ``theta_j`` with
    their values at ``theta_j + 2*pi``.  Node 0 is the seam itself, so this
    contains the density-current boundary check.
    """
    if grid is None:
        from .core import make_grid

        grid = make_grid(64)
    residuals = {}
    fields = []
    for theta in (grid.nodes, grid.nodes + 2.0 * np.pi):
        psi, dpsi = s.evaluate(theta, params.hbar)
        fields.append((
            np.abs(psi) ** 2,
            2.0 * np.real(np.conj(psi) * dpsi),
            current_from_derivative(psi, dpsi, s, params),
        ))
    for name, before, after in zip(("rho", "rho_theta", "J"), fields[0], fields[1]):
        residuals[name] = float(np.max(np.abs(after - before)))
    return OracleVerdict(residuals, tolerance)
