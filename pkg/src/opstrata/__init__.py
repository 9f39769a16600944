"""Explicit, certified paths between linear maps of equal rank.

The package builds piecewise closed-form paths ``lam -> T(lam)`` that stay
inside a fixed-rank (or fixed kernel/cokernel dimension) set of matrices,
certifies them by dense sampling, and checks the dimension count of each
rank stratum against an explicit tangent-space computation.
"""

from .certify import (
    PathCertificate,
    SegmentRecord,
    certify,
    random_stratum_point,
    random_subspace,
    sample_grid,
)
from .connect import (
    EquivalenceChain,
    StratumSpec,
    build_chain,
    connect_equiv_class,
    connect_fredholm,
    connect_rank_stratum,
    fredholm_data,
)
from .errors import *  # noqa: F401,F403
from .geometry import (
    TangentSpaceReport,
    canonical_embeddings,
    canonical_projectors,
    normal_slice_dim,
    splits_ambient,
    stratification_report,
    stratum_dim,
    tangent_membership,
    tangent_space_dim,
)
from .linalg import (
    RankDecision,
    column_space,
    null_space,
    numerical_rank,
    restricted_inverse,
    row_space,
    solve,
)
from .paths import (
    AffineSegment,
    Invariant,
    OperatorPath,
    PathSegment,
    RightAffineSegment,
    RotationSegment,
    canonical_straight_line_flip,
    evaluate,
    gl_connect,
    reflection_representative,
    seg_kernel_align,
    seg_range_align,
    seg_sign_flip,
    straight_line_flip_path,
)
from .projectors import (
    GraphOperator,
    ObliqueProjector,
    graph_operator,
    graph_subspace,
    oblique_projector,
    projector_update,
)
from .subspace import (
    Decomposition,
    Subspace,
    common_complement,
    common_complement_parts,
    complementarity,
    intersect,
    largest_angle,
    orthogonal_complement,
    principal_angles,
    subspace_sum,
)

__version__ = "0.1.0"
