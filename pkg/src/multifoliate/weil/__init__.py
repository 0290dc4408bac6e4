"""Weil algebras, inductive systems of them, and their action on Cartesian multifibered objects."""

from .algebra import (
    AlgebraHom,
    WeilAlgebra,
    augmentation_hom,
    dual_numbers,
    identity_hom,
    real_line,
    substitution_hom,
    tensor_product,
    truncated_polynomial_algebra,
    unit_hom,
    validate_hom,
    validate_weil_algebra,
)
from .fiber import (
    CartesianMultifibered,
    FiberProduct,
    MorphismCheck,
    PolyMultifiberedMap,
    ProductReport,
    WeilSystem,
    apply_fiber_product,
    base_is_surjective,
    cartesian_object,
    constant_weil_system,
    fiber_product,
    i_alpha,
    identify,
    identify_inverse,
    lift_plain_map,
    o_alpha,
    o_alpha_inverse,
    product_object,
    product_preservation_check,
    t_mu_apply,
    validate_multifibered_map,
    validate_system_morphism,
    validate_weil_system,
    weil_apply,
)
from .polynomial import PolyMap, Polynomial
