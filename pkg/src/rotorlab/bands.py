"""Free-rotator band structure ``E_n(k0) = (n*hbar + k0)^2 / 2m`` over ``k0`` in ``[0, hbar)``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_PARAMS, PhysicsParams
from .dynamics import band_energy

SHIFT_TOLERANCE = 1e-14


@dataclass(frozen=True)
class BandPoint:
    n: int
    k0: float
    energy: float


def band_diagram(n_min: int, n_max: int, k0_samples: int, params: PhysicsParams = DEFAULT_PARAMS) -> list:
    """All band points for ``n_min <= n <= n_max`` and ``k0_samples`` uniform offsets, sorted by ``(n, k0)``."""
    if n_min > n_max:
        raise ValueError(f"n_min ({n_min}) exceeds n_max ({n_max})")
    if k0_samples < 2:
        raise ValueError(f"need at least 2 k0 samples, got {k0_samples}")
    offsets = params.hbar * np.arange(k0_samples) / k0_samples
    return [
        BandPoint(n, float(k0), band_energy(n, float(k0), params))
        for n in range(n_min, n_max + 1)
        for k0 in offsets
    ]


@dataclass(frozen=True)
class ShiftReport:
    max_residual: float
    checked: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.max_residual <= self.tolerance


def shift_invariance_check(diagram, params: PhysicsParams = DEFAULT_PARAMS,
                           tolerance: float = SHIFT_TOLERANCE) -> ShiftReport:
    """Check ``E(n, k0 + hbar) == E(n + 1, k0)`` against the diagram's stored energies.

    Only pairs where band ``n + 1`` is present at the same ``k0`` are used, so
    the top band is never compared against something outside the diagram.
    The residual is relative to ``max(1, |E|)``.
    """
    stored = {(p.n, p.k0): p.energy for p in diagram}
    worst, count = 0.0, 0
    for p in diagram:
        upper = stored.get((p.n + 1, p.k0))
        if upper is None:
            continue
        shifted = band_energy(p.n, p.k0 + params.hbar, params)
        worst = max(worst, abs(shifted - upper) / max(1.0, abs(upper)))
        count += 1
    return ShiftReport(worst, count, tolerance)
