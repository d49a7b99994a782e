"""Exact tensor tools for bounding the complexity of matrix multiplication."""
from .bounds import (
    BoundResult,
    bini_omega,
    flattening_bound,
    koszul_bound,
    koszul_sweep,
    laser_cw_omega,
    laser_kron_omega,
    max_border_rank,
    schonhage_omega,
)
from .constructions import (
    big_cw_tensor,
    cw_tensor,
    matmul_kron_permutation,
    matmul_tensor,
    smat_poly,
    unit_tensor,
)
from .decompositions import (
    GroupElement,
    OrbitDecomposition,
    RankDecomposition,
    RankOneTerm,
    VerificationReport,
    WaringDecomposition,
    WaringTerm,
    apply_group_element,
    is_symmetry,
    naive_decomposition,
    orbit_expand,
    stabilizer_check,
    verify_rank_decomposition,
    verify_waring_decomposition,
)
from .errors import (
    DivergenceError,
    DomainError,
    OmegaLabError,
    ParseError,
    PreconditionError,
    ShapeError,
)
from .exact import ExactMatrix, SplitMix64, exact_rank, random_rational_matrix, to_scalar
from .kernels import BACKEND
from .tensor import (
    CubicPoly,
    Tensor3,
    cube_of_linear_form,
    direct_sum,
    flatten,
    koszul_flattening,
    kronecker,
    kronecker_power,
    permute_coordinates,
    symmetrize,
    tensor_equal,
    trilinear_eval,
    zero_tensor,
)

__version__ = "0.1.0"
