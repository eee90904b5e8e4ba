"""Numerical laboratory for the single-coordinate quantum rotator."""

__version__ = "0.1.0"

from .core import (
    AMPLITUDE_THRESHOLD,
    AngleGrid,
    GaugeError,
    GaugeTag,
    GridState,
    ObservableFields,
    PhaseUndefinedError,
    PhysicsParams,
    PlaneWaveState,
    make_grid,
    observables,
    sample_plane_wave,
    spectral_derivative,
)
from .gauge import (
    ActionRecord,
    advance_k,
    canonical_momentum_apply,
    to_momentum_gauge,
    to_torque_gauge,
)
from .boundary import (
    BCReport,
    check_amplitude_action,
    check_density_current,
    check_standard,
    classify,
)
from .madelung import (
    MadelungFields,
    complex_momentum_density,
    decompose,
    reconstruct,
    residual_eq1,
    residual_eq2,
)
from .superpose import (
    BlochDecomposition,
    LatticeViolation,
    RawSuperposition,
    admissibility_oracle,
    density_of,
    lattice_check,
)
from .dynamics import (
    QuasiEigenstate,
    band_energy,
    energy_flow_rate,
    evolve_analytic,
    evolve_stepped,
    stationarity_check,
)
from .bands import BandPoint, band_diagram, shift_invariance_check
