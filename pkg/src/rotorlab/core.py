"""Constants, the periodic angle grid, state containers and spectral calculus.

Every state on the ring is written as ``psi(theta) = exp(i*twist*theta) * p(theta)``
with ``p`` 2*pi-periodic.  Plane waves with a non-integer exponent are therefore
represented exactly: their periodic part is a constant.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

AMPLITUDE_THRESHOLD = 1e-12


class PhaseUndefinedError(ValueError):
    """Raised when a phase-derived quantity is requested where the amplitude vanishes."""


class GaugeError(ValueError):
    """Raised when an operation receives a state tagged with the wrong gauge."""


class GaugeTag(str, enum.Enum):
    MOMENTUM = "momentum"
    TORQUE = "torque"

    @classmethod
    def parse(cls, value) -> "GaugeTag":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown gauge {value!r}; expected 'momentum' or 'torque'"
            ) from None


@dataclass(frozen=True)
class PhysicsParams:
    """Natural-unit constants of the rotator.

    Parameters
    ----------
    hbar : float
        Quantum of action, must be positive.
    inertia : float
        Moment-of-inertia parameter ``m_i``, must be positive.
    torque : float
        Constant applied torque ``T`` (any sign).
    """

    hbar: float = 1.0
    inertia: float = 1.0
    torque: float = 0.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not self.inertia > 0:
            raise ValueError(f"inertia must be positive, got {self.inertia}")
        if not np.isfinite(self.torque):
            raise ValueError(f"torque must be finite, got {self.torque}")


DEFAULT_PARAMS = PhysicsParams()


@dataclass(frozen=True)
class AngleGrid:
    """Uniform nodes ``theta_j = -pi + 2*pi*j/N``; ``theta = pi`` is identified with ``-pi``."""

    n_samples: int

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 8:
            raise ValueError(
                f"grid needs at least 8 integer samples, got {self.n_samples}"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n_samples

    @property
    def nodes(self) -> np.ndarray:
        return -np.pi + self.spacing * np.arange(self.n_samples)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Integer Fourier wavenumbers in FFT order, Nyquist mode negative."""
        return np.fft.fftfreq(self.n_samples, d=1.0 / self.n_samples)


def make_grid(n_samples: int) -> AngleGrid:
    return AngleGrid(n_samples)


def spectral_derivative(samples, grid: AngleGrid, twist: float = 0.0, order: int = 1) -> np.ndarray:
    """Fourier derivative of ``samples`` on ``grid``.

    ``twist`` declares the samples as ``exp(i*twist*theta)`` times a periodic
    function; the carrier is divided out before the FFT and differentiated
    analytically.  With ``twist=0`` this is the usual periodic spectral
    derivative, exact for integer harmonics ``|n| < N/2``.
    """
    samples = np.asarray(samples)
    if samples.shape != (grid.n_samples,):
        raise ValueError(
            f"expected {grid.n_samples} samples, got shape {samples.shape}"
        )
    if twist == 0.0:
        periodic = samples.astype(complex)
        carrier = None
    else:
        carrier = np.exp(1j * twist * grid.nodes)
        periodic = samples * np.conj(carrier)
    mult = (1j * (grid.wavenumbers + twist)) ** order
    if grid.n_samples % 2 == 0:
        mult[grid.n_samples // 2] = 0.0
    out = np.fft.ifft(mult * np.fft.fft(periodic))
    if carrier is not None:
        out = out * carrier
    if np.isrealobj(samples) and twist == 0.0:
        return out.real
    return out


def fourier_interpolate(periodic, grid: AngleGrid, theta):
    """Evaluate the trigonometric interpolant of periodic node values and its derivative.

    Returns ``(value, derivative)`` at ``theta`` (scalar or array).  The Nyquist
    mode is treated as a cosine so the interpolant is real for real data.
    """
    theta = np.asarray(theta, dtype=float)
    n = grid.n_samples
    coeffs = np.fft.fft(np.asarray(periodic, dtype=complex)) / n
    ks = grid.wavenumbers
    # wrap into [-pi, pi) so the interpolant is exactly periodic
    x = np.mod(theta + np.pi, 2.0 * np.pi)
    phase = np.exp(1j * np.multiply.outer(x, ks))
    value = phase @ coeffs
    deriv = phase @ (1j * ks * coeffs)
    if n % 2 == 0:
        c = coeffs[n // 2]
        half = n // 2
        # replace exp(-i*half*x) by cos(half*x)
        value = value - c * np.exp(-1j * half * x) + c * np.cos(half * x)
        deriv = deriv - (-1j * half) * c * np.exp(-1j * half * x) - half * c * np.sin(half * x)
    return value, deriv


@dataclass(frozen=True)
class PlaneWaveState:
    """Closed-form state ``a * exp(i*mu*theta)``.

    ``mu`` is ``lam`` in the momentum gauge and ``lam + k/hbar`` in the torque
    gauge; see :meth:`exponent`.
    """

    amplitude: complex = 1.0
    lam: float = 0.0
    k: float = 0.0
    gauge: GaugeTag = GaugeTag.MOMENTUM
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gauge", GaugeTag.parse(self.gauge))
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    def exponent(self, hbar: float = 1.0) -> float:
        if self.gauge is GaugeTag.TORQUE:
            return self.lam + self.k / hbar
        return self.lam

    def physical_momentum(self, hbar: float = 1.0) -> float:
        """Gauge-invariant momentum ``hbar*lam + k``."""
        return hbar * self.lam + self.k

    def norm(self) -> float:
        return 2.0 * np.pi * abs(self.amplitude) ** 2

    def evaluate(self, theta, hbar: float = 1.0):
        mu = self.exponent(hbar)
        value = self.amplitude * np.exp(1j * mu * np.asarray(theta, dtype=float))
        return value, 1j * mu * value

    def reflected(self) -> "PlaneWaveState":
        return replace(self, lam=-self.lam, k=-self.k)


@dataclass(frozen=True, eq=False)
class GridState:
    """Wave function sampled on an :class:`AngleGrid`.

    ``samples * exp(-i*twist*theta)`` is 2*pi-periodic and band limited.  In
    the momentum gauge the samples are ``u``, in the torque gauge ``psi``.
    """

    samples: np.ndarray
    grid: AngleGrid
    gauge: GaugeTag = GaugeTag.MOMENTUM
    k: float = 0.0
    time: float = 0.0
    twist: float = 0.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex)
        if samples.shape != (self.grid.n_samples,):
            raise ValueError(
                f"sample count {samples.shape} does not match grid size {self.grid.n_samples}"
            )
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "gauge", GaugeTag.parse(self.gauge))

    @property
    def periodic_part(self) -> np.ndarray:
        if self.twist == 0.0:
            return self.samples
        return self.samples * np.exp(-1j * self.twist * self.grid.nodes)

    def total_probability(self) -> float:
        return float(self.grid.spacing * np.sum(np.abs(self.samples) ** 2))

    def derivative(self, order: int = 1) -> np.ndarray:
        return spectral_derivative(self.samples, self.grid, self.twist, order)

    def evaluate(self, theta, hbar: float = 1.0):
        """Value and derivative from the Fourier interpolant, valid for any real theta."""
        theta = np.asarray(theta, dtype=float)
        p, dp = fourier_interpolate(self.periodic_part, self.grid, theta)
        carrier = np.exp(1j * self.twist * theta)
        return carrier * p, carrier * (dp + 1j * self.twist * p)

    def with_samples(self, samples, **changes) -> "GridState":
        return replace(self, samples=samples, **changes)


@dataclass(frozen=True, eq=False)
class ObservableFields:
    rho: np.ndarray
    rho_theta: np.ndarray
    current: np.ndarray


def sample_plane_wave(state: PlaneWaveState, grid: AngleGrid, hbar: float = 1.0) -> GridState:
    mu = state.exponent(hbar)
    samples = state.amplitude * np.exp(1j * mu * grid.nodes)
    return GridState(samples, grid, state.gauge, state.k, state.time, twist=mu)


def _gauge_shift(state, params: PhysicsParams) -> float:
    # momentum-gauge bookkeeping keeps k outside the wave function
    return state.k if state.gauge is GaugeTag.MOMENTUM else 0.0


def current_from_derivative(psi, dpsi, state, params: PhysicsParams):
    """``J = (hbar/m) Im(psi* psi_theta) + rho k/m`` (the k term only in the momentum gauge)."""
    flux = np.imag(np.conj(psi) * dpsi)
    rho = np.abs(psi) ** 2
    return (params.hbar * flux + rho * _gauge_shift(state, params)) / params.inertia


def observables(state, params: PhysicsParams = DEFAULT_PARAMS, grid: AngleGrid | None = None) -> ObservableFields:
    """Gauge-invariant density, density gradient and probability current.

    Grid states are evaluated at their own nodes and must not vanish anywhere.
    Closed-form states (plane waves, superpositions) are evaluated on ``grid``,
    an 8-node grid by default.
    """
    if isinstance(state, GridState):
        psi = state.samples
        amp = np.abs(psi)
        if np.any(amp < AMPLITUDE_THRESHOLD):
            bad = int(np.argmin(amp))
            raise PhaseUndefinedError(
                f"amplitude {amp[bad]:.3e} below {AMPLITUDE_THRESHOLD:g} at node {bad}"
            )
        dpsi = state.derivative()
    elif isinstance(state, PlaneWaveState):
        grid = grid or make_grid(8)
        n = grid.n_samples
        rho = np.full(n, abs(state.amplitude) ** 2)
        current = rho * state.physical_momentum(params.hbar) / params.inertia
        return ObservableFields(rho, np.zeros(n), current)
    else:
        grid = grid or make_grid(8)
        psi, dpsi = state.evaluate(grid.nodes, params.hbar)
    rho = np.abs(psi) ** 2
    rho_theta = 2.0 * np.real(np.conj(psi) * dpsi)
    return ObservableFields(rho, rho_theta, current_from_derivative(psi, dpsi, state, params))
