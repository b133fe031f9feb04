"""Exact arithmetic for quaternion orders, ideal classes, and locally free
class groups over Q and quadratic fields."""

from .latorder import (
    GramMatrix,
    IsoResult,
    QuatOrder,
    RightIdeal,
    class_set,
    eichler_class_number,
    ideal_mul,
    isomorphic_ideals,
    maximal_order,
    reduce_ideal,
    right_ideals_of_norm,
    short_vectors,
)
from .lfcg import (
    CancellationVerdict,
    EichlerReport,
    GroupLawWitness,
    MatrixFactor,
    MaximalOrderDescriptor,
    QuaternionFactor,
    RamifiedQuaternionFactor,
    RayClassGroup,
    SeparableAlgebraSpec,
    StableClass,
    cancellation_check,
    cancellation_table,
    eichler_condition,
    group_law_check,
    ray_class_group,
    spec_from_json,
    stable_class,
    stably_isomorphic,
    swan_class_group,
)
from .linalg import Lattice
from .numtheory import (
    Place,
    factor,
    hilbert_symbol,
    is_prime,
    jacobi,
    kronecker,
    legendre,
    primes,
    primes_below,
    valuation,
)
from .quadfield import (
    RATIONALS,
    BinaryForm,
    ClassGroup,
    QuadField,
    QuadIdeal,
    QuadModule,
    class_group,
    ideal_class,
    modules_isomorphic,
    prime_ideals_above,
    reduced_forms,
    steinitz_class,
)
from .quatalg import (
    Quaternion,
    QuaternionAlgebra,
    QuatMatrix,
    b_p_infinity,
    embed_phi_r,
    matrix_nrd,
    ramified_places,
)

__version__ = "0.1.0"
