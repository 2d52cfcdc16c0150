"""Vacuum energy extraction from the 1+1D Dirac sea by a bandlimited drive.

A desk-scale numerical lab: build the free plane-wave spinor basis on a
periodic box, drive it with the external potential 4 q cos(k_w z) sin(m t)/t,
evolve individual modes dynamically, and compare the measured energy shifts
with closed-form perturbation theory, whose negative-branch sum telescopes to
-4 pi q^2 k_w^2 L.
"""

from .basis import (
    FreeMode,
    ModeLabel,
    PhysicalParams,
    check_orthonormality,
    free_mode,
    inner,
    momentum,
)
from .drive import (
    CouplingMatrixElement,
    DriveProfile,
    band_edge_check,
    coupling,
    coupling_matrix,
    profile_transform,
    sample_potential,
    time_profile,
)
from .errors import BandEdgeError, ConfigError, FitError, ToleranceError
from .evolution import (
    EnergyShiftRecord,
    ModeState,
    TimeGrid,
    Truncation,
    build_truncation,
    compute_shift_record,
    convergence_study,
    energy_shift_numeric,
    evolve_mode,
)
from .perturbation import (
    PerturbativeShift,
    analytic_limit,
    delta_e1,
    delta_e2,
    delta_e2_via_amplitudes,
    partial_vacuum_sum,
    perturbative_shift,
)
from .vacuum import (
    QScalingFit,
    VacuumReport,
    q_scaling_fit,
    vacuum_shift_analytic,
    vacuum_shift_numeric,
)

__version__ = "0.1.0"

__all__ = [
    "BandEdgeError",
    "ConfigError",
    "CouplingMatrixElement",
    "DriveProfile",
    "EnergyShiftRecord",
    "FitError",
    "FreeMode",
    "ModeLabel",
    "ModeState",
    "PerturbativeShift",
    "PhysicalParams",
    "QScalingFit",
    "TimeGrid",
    "ToleranceError",
    "Truncation",
    "VacuumReport",
    "analytic_limit",
    "band_edge_check",
    "build_truncation",
    "check_orthonormality",
    "compute_shift_record",
    "convergence_study",
    "coupling",
    "coupling_matrix",
    "delta_e1",
    "delta_e2",
    "delta_e2_via_amplitudes",
    "energy_shift_numeric",
    "evolve_mode",
    "free_mode",
    "inner",
    "momentum",
    "partial_vacuum_sum",
    "perturbative_shift",
    "profile_transform",
    "q_scaling_fit",
    "sample_potential",
    "time_profile",
    "vacuum_shift_analytic",
    "vacuum_shift_numeric",
    "__version__",
]
