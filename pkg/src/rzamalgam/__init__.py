"""Real zero and stable polynomial amalgamation toolkit."""

from .amalgamation import (
    AmalgamationProblem,
    IncompatibleError,
    PreconditionError,
    amalgamate_determinantal,
    amalgamate_disjoint,
    amalgamate_quadratic,
    mc_orthogonal_amalgam,
)
from .certify import (
    Status,
    Verdict,
    det_polynomial,
    quadratic_real_zero,
    real_zero_sample,
    stable_sample,
    wagner_wei_stable,
)
from .matroids import (
    DeltaMatroid,
    Matroid,
    amalgam_search,
    bases_generating_poly,
    from_bases,
    is_delta_matroid,
    poljak_turzik,
)
from .polycore import (
    Polynomial,
    SizeGuardError,
    UPoly,
    elementary_symmetric,
    evaluate,
    format_poly,
    homogeneous_component,
    homogenize,
    multi_affine_part,
    parse,
    partial_derivative,
    restrict_line,
    shift,
    support,
)
from .realroot import count_real_roots, is_real_rooted, squarefree_part

__all__ = [
    "AmalgamationProblem",
    "DeltaMatroid",
    "IncompatibleError",
    "Matroid",
    "Polynomial",
    "PreconditionError",
    "SizeGuardError",
    "Status",
    "UPoly",
    "Verdict",
    "amalgam_search",
    "amalgamate_determinantal",
    "amalgamate_disjoint",
    "amalgamate_quadratic",
    "bases_generating_poly",
    "det_polynomial",
    "from_bases",
    "is_delta_matroid",
    "mc_orthogonal_amalgam",
    "poljak_turzik",
    "quadratic_real_zero",
    "real_zero_sample",
    "stable_sample",
    "wagner_wei_stable",
    "count_real_roots",
    "elementary_symmetric",
    "evaluate",
    "format_poly",
    "homogeneous_component",
    "homogenize",
    "is_real_rooted",
    "multi_affine_part",
    "parse",
    "partial_derivative",
    "restrict_line",
    "shift",
    "squarefree_part",
    "support",
]
