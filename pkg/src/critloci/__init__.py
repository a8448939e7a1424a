"""Degenerate critical loci for three views of P^4.

Exact classification of 4x3 matrices of linear forms that drop rank in
codimension 1, the induced degeneration loci, trifocal Grassmann tensors,
Schur reduction of critical matrices for camera pairs, and Monte-Carlo
instability experiments near the non-linear locus components.
"""

from .poly import (  # noqa: F401
    NotDivisible,
    Poly,
    UnsupportedDegree,
    divide_exact,
    gcd,
    gcd_many,
    linear_form,
    poly_det,
    span_dimension,
)
from .ratlin import kernel_basis, solve  # noqa: F401
from .linclass import (  # noqa: F401
    Canonicalization,
    LinFormMatrix,
    build_family,
    classify_3x2,
    classify_4x3,
    family_realizable,
    maximal_minors_signed,
    reduce_2x2,
    skew_syzygy_matrix,
)
from .loci import decompose, incidence_checks, sample_component, symmetric_matrix_D  # noqa: F401
from .multiview import (  # noqa: F401
    Camera,
    TrifocalTensor,
    center,
    epipole_line,
    grassmann_det,
    line_through,
    project,
    trifocal_from_cameras,
)
from .critical import CameraPairConfig, assemble_M, fixtures, reduce_to_N  # noqa: F401
from .recon import (  # noqa: F401
    assemble_MT,
    correspondences_from_scene,
    estimate_tensor,
    rank_MT_diagnostic,
    tensor_distance,
)
from .harness import ExperimentConfig, calibrate_delta, generate_critical_points, run_sweep  # noqa: F401
