"""Pulsed, dissipative central spin model: exact one-period superoperator,
stationary-state distillation diagnostics, and convergence estimates."""

from .couplings import CouplingSet, generate_couplings, overhauser_max
from .density import DensityMatrix, maximally_mixed, random_density_matrix
from .errors import (
    BasisMismatchError,
    CapacityError,
    DegenerateFixedPointError,
    DiagonalizationError,
    NonConvergentModeError,
    NumericalError,
    ParameterError,
    PositivityError,
    RegimeViolationError,
    SpinDistillError,
    UndefinedObservableError,
)
from .model import (
    EigenBasis,
    ModelParams,
    SpinOperators,
    build_spin_operators,
    default_params,
    dump_eigenbasis,
    joint_eigenbasis,
)
from .observables import (
    ObservableSet,
    bath_polarization_x,
    central_polarization,
    initial_entropy,
    observable_set,
    von_neumann_entropy,
)
from .oracle import (
    FullStateDensity,
    TrionSpace,
    apply_pulse_full,
    build_trion_space,
    embed_spin_state,
    evolve_lindblad,
    iterate_pulses,
    one_period_reference,
    write_trajectory_csv,
)
from .pulsemap import (
    PulseSuperoperator,
    apply_map,
    build_pulse_map,
    g_factor,
    load_pulse_map_entries,
    save_pulse_map,
)
from .spectral import (
    ConvergenceEstimate,
    PropertyReport,
    SpectralDecomposition,
    StationaryState,
    convergence_pulses,
    export_spectrum_csv,
    full_spectrum,
    hermitian_basis_matrix,
    mode_sum_state,
    stationary_state,
    verify_convergence,
    verify_map_properties,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
