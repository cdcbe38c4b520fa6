"""Numerics for slice functions of several hypercomplex variables.

Layers: `algebra` (quaternions and octonions via the doubling construction),
`complexified` (the complexified algebra stems take values in), `stem`
(intrinsic stem functions and Wirtinger calculus), `slicefun` (lifts,
representation formulas, products, spherical operators, sphere zeros),
`integral` (boundary and volume quadrature on polydiscs in a slice plane,
off-slice evaluation, Hartogs extension), `suites` (seeded verification
suites), `cli` (the `hyperslice` entry point).
"""

from .algebra import (
    OCTONION,
    QUATERNION,
    AlgebraElement,
    AlgebraMismatchError,
    AlgebraTag,
    ImaginaryUnit,
    basis,
    basis_product,
    conjugate,
    element,
    inverse,
    left_mult_matrix,
    multiplication_table,
    multiply,
    multiply_batch,
    norm,
    one,
    parse_algebra,
    right_mult_matrix,
    sample_unit_imaginaries,
    sample_unit_imaginary,
    scalar,
    structure_tensor,
    unit_from_vector,
    zero,
)
from .complexified import ComplexifiedElement, c_involutions, c_multiply, times_i
from .integral import (
    BMReport,
    HartogsExtension,
    HartogsRequiresSeveralVariablesError,
    PointTooCloseToBoundaryError,
    PolydiscDomain,
    QuadratureSpec,
    SliceMismatchError,
    bm_boundary_dual,
    bm_boundary_integral,
    bm_volume_dual,
    bm_volume_integral,
    hartogs_extend,
    off_slice_evaluate,
    reproduce_check,
    write_convergence_csv,
)
from .slicefun import (
    DegenerateUnitsError,
    IntrinsicityError,
    NonIntrinsicRestrictionError,
    NotInSliceConeError,
    RealPointError,
    SliceFunction,
    SlicePoint,
    SphereZeroResult,
    ZeroKind,
    check_slice_regular,
    classify_sphere_zeros,
    decompose_point,
    imaginary_element,
    lift,
    lift_evaluate,
    point_from_z,
    representation,
    representation_symmetric,
    restrict_slice,
    slice_point,
    slice_product,
    sphere_values,
    spherical,
    spherical_derivative,
    spherical_value,
    star_product,
)
from .stem import (
    Domain,
    Smoothness,
    StemFunction,
    StemPolynomial,
    check_intrinsic,
    constant_poly,
    coordinate,
    decompose_stem,
    evaluate_stem,
    evaluate_stem_batch,
    is_holomorphic,
    load_polynomials,
    monomial,
    poly_product,
    restrict_stem,
    stem_polynomial,
    stem_polynomial_to_json,
    stem_product,
    wirtinger,
)
from .suites import (
    SUITE_NAMES,
    CheckRecord,
    ExperimentConfig,
    SuiteReport,
    emit_report,
    load_config,
    run_suite,
)

__version__ = "0.1.0"
