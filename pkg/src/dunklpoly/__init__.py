"""Dunkl operators, h-harmonic decompositions and Liouville-type growth tests
for polynomials over finite reflection groups."""

__version__ = "0.1.0"

from .almansi import (
    AlmansiDecomposition,
    HarmonicDecomposition,
    almansi_decompose,
    h_harmonic_decompose,
    laplacian_shift,
    reconstruct,
)
from .coxeter import (
    RootSystem,
    WeightedRootSystem,
    build_named,
    closure_under_reflections,
    from_json,
    group_elements,
    validate,
    weight,
)
from .dunkl import (
    DunklContext,
    dunkl_apply,
    dunkl_laplacian,
    is_h_harmonic,
    polyharmonic_order,
)
from .liouville import classify, growth_exponent, theorem_consistency_suite
from .polycore import (
    NEG_INF,
    LinearForm,
    Polynomial,
    Reflection,
    compose_reflection,
    divide_by_linear_form,
)
from .sphereint import (
    PiRational,
    SphericalIntegrator,
    exact_monomial_integral,
    integrate_sphere,
    m1,
    mean_value_check,
    positive_part_m1,
)
