"""Two electromagnetic modes coupled to a common thermal reservoir.

Numerical integration of the collective-damping master equation in a
truncated two-mode Fock space, together with the closed-form results it
must reproduce: the time-dependent characteristic function, Q-function,
the zero-temperature coherent-dyad map, purity and overlap fidelities,
and the decoherence-free family |alpha, -alpha>.
"""

from .analytic import (
    ChannelParams,
    PhasePoint,
    QPoint,
    chi_analytic,
    chi_pde_residual,
    fidelity_antisym,
    fidelity_sym,
    n_of_t,
    planck_occupancy,
    purity_coherent_paper,
    purity_coherent_rotated,
    q_analytic,
    zero_temp_map,
)
from .fock import (
    CoherentSuperposition,
    DensityOperator,
    DyadExpansion,
    DyadTerm,
    ModeCutoff,
    StateVector,
    annihilation,
    coherent_ket,
    default_cutoff,
    displacement,
    dyad_expansion_of,
    entangled_coherent,
    superposition_to_density,
    tensor,
)
from .observables import (
    DfsReport,
    chi_numeric,
    dfs_deviation,
    overlap,
    purity_numeric,
    q_numeric,
    trace_distance,
)
from .sim import (
    SimConfig,
    Trajectory,
    correlated_generator,
    evolve,
    independent_generator,
    kernel_backend,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "CoherentSuperposition",
    "DensityOperator",
    "DfsReport",
    "DyadExpansion",
    "DyadTerm",
    "ModeCutoff",
    "PhasePoint",
    "QPoint",
    "SimConfig",
    "StateVector",
    "Trajectory",
    "annihilation",
    "chi_analytic",
    "chi_numeric",
    "chi_pde_residual",
    "coherent_ket",
    "correlated_generator",
    "default_cutoff",
    "dfs_deviation",
    "displacement",
    "dyad_expansion_of",
    "entangled_coherent",
    "evolve",
    "fidelity_antisym",
    "fidelity_sym",
    "independent_generator",
    "kernel_backend",
    "n_of_t",
    "overlap",
    "planck_occupancy",
    "purity_coherent_paper",
    "purity_coherent_rotated",
    "purity_numeric",
    "q_analytic",
    "q_numeric",
    "superposition_to_density",
    "tensor",
    "trace_distance",
    "zero_temp_map",
]
