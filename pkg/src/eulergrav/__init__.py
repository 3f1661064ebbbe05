"""Well-balanced central-upwind finite-volume solver for compressible flow
under a static gravitational potential.

The gravity source is folded into the momentum flux through running load
integrals, and interface pressures are reconstructed from the resulting
equilibrium pressures, so motionless hydrostatic states are preserved to
rounding error while transient flows keep full second-order resolution.
"""

from .core import (
    ConservedState1D,
    ConservedState2D,
    ConstructionError,
    GasParams,
    Grid1D,
    Grid2D,
    PositivityError,
    PotentialField1D,
    PotentialField2D,
    SolverError,
    StepLimitError,
    augment_energy,
    deaugment_energy,
    energy_from_pressure,
    pressure_from_conserved,
    sample_potential_1d,
    sample_potential_2d,
    sound_speed,
)
from .diagnostics import (
    ErrorReport,
    compare_snapshots,
    convergence_study,
    l1_error,
    linf_error,
    read_snapshot,
    report_fields,
    restrict_fine_to_coarse,
    run_problem,
    steady_drift,
    write_snapshot,
)
from .evolution import (
    HYDROSTATIC,
    REFLECTING,
    ZERO_ORDER,
    BoundarySpec1D,
    BoundarySpec2D,
    RunResult,
    SolverConfig,
    TimeControls,
    run,
    semidiscrete_rhs,
    ssp_rk3_step,
    stable_dt,
)
from .flux1d import CutoffParams
from .gravity import (
    EquilibriumField1D,
    EquilibriumField2D,
    hydrostatic_load_1d,
    hydrostatic_load_2d,
    hydrostatic_state_1d,
    hydrostatic_state_2d,
    quadratic_load_linear_potential,
)
from .problems import (
    PROBLEM_NAMES,
    Problem1D,
    Problem2D,
    explosion_2d,
    get_problem,
    isothermal_1d,
    isothermal_2d,
    sod_tube,
)

__version__ = "0.1.0"
