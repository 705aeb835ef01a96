"""Random discrete copulas on equidistant meshes.

Exact laws and moments of the permutation field ``X_k`` and the Dirichlet
mixture field ``Y_k``, their checkerboard extensions, seeded samplers, and
enumeration oracles.
"""

from .analytic import (
    DIRECTIONS,
    AggregatedDirichlet,
    CdfEstimate,
    ConditionalTable,
    DirichletMoments,
    FieldLaw,
    aggregated_dirichlet,
    cdf_Y,
    conditional_table,
    count_L,
    cov_X_adjacent,
    cov_Y_adjacent,
    dirichlet_moments,
    hypergeometric_pmf,
    mean_X,
    mean_Xhat,
    mean_Y,
    mean_Yhat,
    pmf_X,
    pmf_Xhat,
    support,
    var_X,
    var_Xhat,
    var_Y,
    var_Yhat,
    variance_surface,
)
from .core import (
    BistochasticMatrix,
    DiscreteCopula,
    GridPoint,
    Mesh,
    PermutationCopula,
    Rect,
    ValidationReport,
    Violation,
    birkhoff_decompose,
    bistochastic_to_copula,
    c_volume,
    convex_combination,
    copula_to_bistochastic,
    permutation_to_copula,
    product_copula,
    reconstruct,
    require_valid,
    validate,
)
from .errors import (
    CapacityError,
    ConstraintError,
    CopulaForgeError,
    DomainError,
    NotBistochasticError,
    ShapeError,
)
from .extension import (
    LocalCoords,
    checkerboard_density,
    checkerboard_eval,
    checkerboard_eval_array,
    local_coords,
    surface_lattice,
)
from .oracle import (
    JointLaw,
    MCStats,
    SamplerSpec,
    dirichlet_variance_oracle,
    enumerate_conditional_table,
    enumerate_joint,
    enumerate_pmf,
    enumerate_volume_law,
    mc_stats,
)
from .rational import format_rational, parse_rational
from .rng import SeededRng
from .sampling import (
    DirichletWeights,
    empirical_copula,
    field_samples,
    sample_dirichlet,
    sample_pairs,
    sample_permutation,
    sample_uniform_simplex,
    sample_X,
    sample_Y_grid,
    sample_Y_point,
)

__version__ = "0.1.0"
