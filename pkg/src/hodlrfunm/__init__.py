"""Functions of quasiseparable matrices with certified off-diagonal decay.

The package evaluates holomorphic and meromorphic functions of dense or
HODLR-compressed matrices through adaptive contour quadrature of the
resolvent, and provides the matching closed-form bounds on the singular
values of off-diagonal blocks of f(A), so computed compression ranks can
be checked against what the theory promises.
"""

from .bounds import (
    CROUZEIX_CONSTANT,
    DecayBound,
    Enclosure,
    FunctionMeta,
    bound_curve_csv,
    composition_singular_bound,
    enclosure_disc,
    enclosure_from_numerical_range,
    enclosure_hull_disc,
    enclosure_interval,
    function_meta,
    geometry_factor,
    horner_matrix,
    horner_qr_entry_bound,
    krylov_matrix,
    krylov_qr_entry_bound,
    offdiag_decay_bound,
    optimize_bound_curve,
    optimize_bound_radius,
    outer_product_singular_bound,
    reconstruct_offdiag_block,
    reversed_product_tail_bound,
)
from .contour import (
    ContourSpec,
    PoleSpec,
    QuadratureReport,
    contour_adaptive,
    contour_quadrature_fixed,
    funm_essential,
    funm_with_poles,
    pole_rational,
    quotient_derivative,
)
from .dense import (
    SvdResult,
    eigenvector_cond,
    funm_eig,
    householder_qr,
    is_hermitian,
    numerical_range_boundary,
    singular_values,
    truncated_svd,
)
from .errors import (
    ConvergenceError,
    DegenerateContourError,
    ExperimentIntegrityError,
    InvalidGeometryError,
    InvalidInputError,
    NearDefectiveError,
    NodeSingularityError,
    RankOverflowError,
    SingularPivotError,
)
from .experiments import (
    ExperimentConfig,
    gen_hermitian_tridiagonal,
    gen_scaled_unitary_hessenberg,
    generate_matrix,
    kappa_max_trailing,
    run_decay_experiment,
    run_expsin_benchmark,
)
from .functions import ScalarFunction, function_names, get_function
from .hodlr import (
    HodlrConfig,
    HodlrMatrix,
    LowRankBlock,
    hodlr_abs_rowsum_bound,
    hodlr_add,
    hodlr_adjoint,
    hodlr_depth,
    hodlr_from_dense,
    hodlr_identity,
    hodlr_inverse,
    hodlr_matvec,
    hodlr_mul,
    hodlr_norm2_estimate,
    hodlr_qsrank,
    hodlr_scale,
    hodlr_shift_diagonal,
    hodlr_solve,
    hodlr_to_dense,
    read_hodlr,
    write_hodlr,
)
from .matrixio import matrix_from_text, matrix_to_text, read_matrix, write_matrix

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
