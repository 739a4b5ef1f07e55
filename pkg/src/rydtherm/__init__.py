"""Blackbody-radiation Stark shifts and thermometry for divalent Rydberg atoms.

Layers, bottom up: pinned physical constants and unit conversions; exact
angular-momentum algebra; quantum-defect species data; a Numerov radial
solver in the Coulomb approximation; dipole transition tables; the
principal-value thermal kernel and BBR shifts/linewidths; AC/static
polarizabilities; magic-lattice solutions beyond the dipole
approximation; and thermometry observables (inversion, stray-field
separation, error budgets).
"""

from . import constants, units
from .bbr import (
    BBRShiftResult,
    LinewidthResult,
    QuadratureError,
    bbr_depopulation_rate,
    bbr_shift_integral,
    bbr_shift_sum,
    farley_wing,
    farley_wing_fast,
    farley_wing_zero,
    free_electron_sensitivity,
    free_electron_shift,
    linewidths,
    natural_linewidth,
    planck_spectral_density,
    static_limit_shift,
)
from .lattice import (
    LatticeConfig,
    MagicResult,
    MagicSolverError,
    RydbergLatticeShift,
    lattice_alpha_au,
    metastable_lattice_shift,
    pick_magic_root,
    ponderomotive_coupling_bound,
    rydberg_lattice_shift,
    solve_magic_wavelength,
    transition_energy_au,
    transition_wavelength,
    trap_depth,
)
from .polarizability import (
    NonPerturbativeFieldError,
    PolarizabilityResult,
    ResonanceGuardError,
    ac_polarizability,
    ac_polarizability_metastable,
    dc_stark_shift,
    static_polarizability,
)
from .radial import (
    MeshOverflowError,
    RadialSolver,
    RadialUnsolvableError,
    default_solver,
    sin2_matrix_element,
)
from .species import RydbergState, Species, SpeciesDataError, load_species
from .thermometry import (
    ErrorBudget,
    ThermometryError,
    ThermometryMeasurement,
    ThermometrySolution,
    error_budget,
    invert_temperature,
    joint_solve_temperature_field,
    measurement_budget,
    state_bbr_sensitivity,
    transition_bbr_sensitivity,
    transition_bbr_shift,
    vdw_shift_estimate,
)
from .transitions import (
    Channel,
    TransitionTable,
    build_transition_table,
    channel_alpha_au,
    downward_channels,
    einstein_a_s,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
