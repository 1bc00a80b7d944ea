"""Exact computation in towers of finite-dimensional spaces.

Everything is built from four layers:

- exact scalar domains and dense linear algebra over them (`fields`,
  `linalg`),
- towers of levels with connecting maps, and level-indexed maps between
  towers (`towers`),
- the closure machinery: stabilization of kernel chains and constructive
  preimage certificates (`closure`),
- two applications: bar-resolution group cohomology (`groups`,
  `cohomology`) and the classical integer/density boundary examples
  (`counterexamples`).

The command line front end lives in `prolim.cli`.
"""

__version__ = "0.1.0"

from .errors import (
    CertificateError,
    DepthInsufficientError,
    DocumentError,
    FieldMismatchError,
    InexactDivisionError,
    LevelProviderError,
    NotAFieldError,
    NotInImageError,
    ProlimError,
    ShapeError,
    SizeCapError,
    SquareCommutationError,
    UnstabilizedError,
)
from .fields import GF, QQ, ZZ, Scalar, domain_from_token
from .linalg import (
    Matrix,
    Selection,
    Subspace,
    kernel_basis,
    matrix_image,
    matrix_inverse,
    preimage_subspace,
    rref,
    solve_particular,
)
from .towers import (
    DEFAULT_WINDOW,
    BandMapSpec,
    Tower,
    TowerMap,
    TowerVector,
    constant_tower,
    coordinate_tower,
    first_inconsistency,
    push_subspace,
    reindex_cofinal,
    stable_images,
    tower_from_levels,
    towermap_from_band,
    towermap_from_levels,
    verify_squares,
)
from .closure import (
    PreimageCertificate,
    StabilizationRecord,
    construct_preimage,
    deepen_and_recheck,
    kernel_level_image,
    per_level_membership,
    stabilization_index,
    stabilization_table,
    verify_certificate,
)
from .groups import (
    Representation,
    ball_enumerate,
    cyclic,
    finite_table,
    fixed_subspace,
    free,
    free_abelian,
)
from .cohomology import (
    CochainPrefix,
    certificate_cochain,
    coboundary,
    coboundary_apply,
    coboundary_value,
    cochain_tower,
    cocycle_defect,
    finite_cohomology_dims,
    reindexed_coboundary,
    solve_coboundary,
)
from .counterexamples import (
    DensityMatch,
    DensityProbe,
    IntBandSystem,
    example1_min_norm,
    example1_min_norm_series,
    example1_over_field,
    example1_per_level_solvable,
    example1_towermap,
    example2_approximate,
    sqrt_decimal,
)
