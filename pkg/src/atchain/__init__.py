"""Spectral analysis of biased adjacent-transposition Markov chains.

The chain lives on permutations of {1..n}: a step picks an adjacent pair
of positions and sorts or unsorts it according to pairwise stay
probabilities p_{i,j}.  For regular parameter vectors the package
computes spectra, checks when the gap attains
lambda_star(n) = (1 - cos(pi/n)) / (n - 1), counts the multiplicity of
the gap eigenvalue against its neutral-label prediction, builds the
explicit gap eigenfunctions, and verifies the rigidity structure of gap
eigenvectors.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .chain import (
    DENSE_MAX_N,
    ChainOperator,
    StationaryDist,
    apply_E,
    apply_F,
    apply_K,
    apply_L,
    commutation_check,
    inner,
    operator_for,
    save_matrix_csv,
    stationary,
)
from .eigenstructure import (
    EigData,
    UTable,
    a0,
    check_orbital_relation,
    check_support_boundary,
    dmap_rank,
    eqcase_checks,
    extract_U,
    h_profile,
    lambda_star_eigenbasis,
    predicted_U_from_D,
    psi,
    wilson_f,
)
from .errors import (
    ArgumentError,
    AtchainError,
    CapacityError,
    ConvergenceError,
    ModeError,
    PreconditionError,
    StructureError,
)
from .params import (
    NeutralSummary,
    ParamVector,
    RegularityReport,
    gen_neutral_interval,
    gen_no_neutral,
    gen_regular_random,
    gen_uniform,
    is_regular,
    m_p,
    neutral_labels,
    s_orbit,
)
from .permcore import (
    MAX_N,
    OrbitHandle,
    Permutation,
    StateSpace,
    g_orbit,
    orbit_index_matrix,
    orbit_partition,
    state_space,
)
from .sampler import ChainRun, make_rng, run_chain, run_tv, step
from .spectral import (
    ITERATIVE_MAX_N,
    OrbitBlock,
    SpectrumReport,
    dense_eigensystem,
    lambda_star,
    orbit_block,
    orbit_charpoly_check,
    quadratic_form_floor,
    spectrum_dense,
    spectrum_iterative,
    tridiag_eigs,
)
from .verify import (
    VerdictRow,
    predicted_multiplicity,
    sweep_from_config,
    verify_instance,
    verify_sweep,
)

__version__ = "0.1.0"
