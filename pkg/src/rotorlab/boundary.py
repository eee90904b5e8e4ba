"""Wrap-residual checks for the three boundary-condition regimes.

Each checker evaluates a state and its first derivative at ``theta = -pi``
and ``theta = +pi`` and reports the absolute mismatch of the relevant
quantities across the seam.  Closed-form states use exact endpoint values,
grid states use their Fourier interpolant.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    AMPLITUDE_THRESHOLD,
    DEFAULT_PARAMS,
    PhaseUndefinedError,
    PhysicsParams,
    current_from_derivative,
)

DEFAULT_TOLERANCE = 1e-10

STANDARD = "standard"
AMPLITUDE_ACTION = "amplitude_action"
DENSITY_CURRENT = "density_current"
REGIMES = (STANDARD, AMPLITUDE_ACTION, DENSITY_CURRENT)

_SEAM = np.array([-np.pi, np.pi])


@dataclass(frozen=True)
class BCReport:
    regime: str
    residuals: dict
    tolerance: float
    verdicts: dict = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "verdicts", {name: r <= self.tolerance for name, r in self.residuals.items()}
        )

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        verdict = {name: _word(ok) for name, ok in self.verdicts.items()}
        verdict["overall"] = _word(self.passed)
        return {
            "regime": self.regime,
            "residuals": dict(self.residuals),
            "tolerance": self.tolerance,
            "verdict": verdict,
        }


def _word(ok: bool) -> str:
    return "pass" if ok else "fail"


def _seam_values(state, params):
    psi, dpsi = state.evaluate(_SEAM, params.hbar)
    return np.asarray(psi), np.asarray(dpsi)


def _wrap(values) -> float:
    return float(abs(values[1] - values[0]))


def _amplitude_or_raise(psi):
    amp = np.abs(psi)
    if np.any(amp < AMPLITUDE_THRESHOLD):
        raise PhaseUndefinedError(
            f"amplitude {amp.min():.3e} at the seam is below {AMPLITUDE_THRESHOLD:g}"
        )
    return amp


def check_standard(state, params: PhysicsParams = DEFAULT_PARAMS, tolerance: float = DEFAULT_TOLERANCE) -> BCReport:
    """Periodicity of the wave function and of its gradient."""
    psi, dpsi = _seam_values(state, params)
    return BCReport(STANDARD, {"psi": _wrap(psi), "psi_theta": _wrap(dpsi)}, tolerance)


def check_amplitude_action(state, params: PhysicsParams = DEFAULT_PARAMS, tolerance: float = DEFAULT_TOLERANCE) -> BCReport:
    """Periodicity of ``A``, ``A_theta`` and ``S_theta``.

    ``S_theta`` is taken as ``hbar*Im(psi* psi_theta)/rho`` at each end, never
    from an unwrapped phase, because the seam jump is what is being tested.
    """
    psi, dpsi = _seam_values(state, params)
    amp = _amplitude_or_raise(psi)
    flux = np.conj(psi) * dpsi
    amp_theta = flux.real / amp
    action_theta = params.hbar * flux.imag / amp**2
    residuals = {"A": _wrap(amp), "A_theta": _wrap(amp_theta), "S_theta": _wrap(action_theta)}
    return BCReport(AMPLITUDE_ACTION, residuals, tolerance)


def check_density_current(state, params: PhysicsParams = DEFAULT_PARAMS, tolerance: float = DEFAULT_TOLERANCE) -> BCReport:
    """Periodicity of ``rho``, ``rho_theta`` and the probability current ``J``."""
    psi, dpsi = _seam_values(state, params)
    rho = np.abs(psi) ** 2
    rho_theta = 2.0 * np.real(np.conj(psi) * dpsi)
    current = current_from_derivative(psi, dpsi, state, params)
    residuals = {"rho": _wrap(rho), "rho_theta": _wrap(rho_theta), "J": _wrap(current)}
    return BCReport(DENSITY_CURRENT, residuals, tolerance)


@dataclass(frozen=True)
class BCSummary:
    standard: BCReport
    amplitude_action: BCReport
    density_current: BCReport

    @property
    def reports(self):
        return (self.standard, self.amplitude_action, self.density_current)

    @property
    def verdict(self) -> str:
        return " ".join(f"{r.regime}={_word(r.passed)}" for r in self.reports)

    def to_dict(self) -> dict:
        out = {r.regime: _word(r.passed) for r in self.reports}
        out["summary"] = self.verdict
        out["reports"] = [r.to_dict() for r in self.reports]
        return out


def classify(state, params: PhysicsParams = DEFAULT_PARAMS, tolerance: float = DEFAULT_TOLERANCE) -> BCSummary:
    return BCSummary(
        check_standard(state, params, tolerance),
        check_amplitude_action(state, params, tolerance),
        check_density_current(state, params, tolerance),
    )
