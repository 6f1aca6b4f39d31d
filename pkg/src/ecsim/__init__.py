"""Energy-conserving subspaces, Wigner functions, and cat-state fidelities for HHG light."""
from .catfidelity import (
    CatFit,
    CatParams,
    FidelityReport,
    cat_state_vector,
    delta_p,
    fidelity_analytic,
    fidelity_bruteforce,
    optimize_cat,
)
from .errors import (
    ConfigError,
    DegenerateCatError,
    DomainError,
    EcsimError,
    EmptySubspaceError,
    InconsistentBasisError,
    OptimizationError,
    UndefinedConditioningError,
    UndefinedMixtureError,
)
from .fockspace import (
    FockVector,
    ModeLadder,
    MultiModeState,
    TruncationWarning,
    coherent_amplitudes,
    coherent_overlap,
    default_truncation,
    fock_coefficient,
    fock_state,
    inner_product,
    product_coherent_state,
)
from .phasespace import (
    WignerGrid,
    wigner_fock_diag,
    wigner_fock_offdiag,
    wigner_of_density,
    wigner_of_diagonal_mixture,
    wigner_of_fock_vector,
    wigner_oracle,
)
from .subspace import (
    DiagonalMixture,
    SubspaceBasis,
    condition_on_harmonic,
    enumerate_energy_basis,
    photon_loss,
    project,
    reduce_ir_diagonal,
    subspace_energy,
    window_energies,
    windowed_project,
)

__version__ = "0.1.0"
