"""Exact computations in Witt and Virasoro enveloping algebras, their symmetric algebras and Verma modules."""

from .algebra import (
    CARTAN1,
    VIRASORO,
    WITT,
    WITT_POSITIVE,
    AlgebraKind,
    CommMonomial,
    CommPoly,
    NCElement,
    NCWord,
    RawNC,
    Variant,
    element_from_json,
    element_to_json,
    make_generator,
    parse_any,
    parse_element,
    parse_nc,
    print_element,
    virasoro_quotient,
)
from .brackets import (
    apply_chain,
    d_a,
    del_a,
    gr,
    lie_bracket,
    lift,
    nc_multiply,
    normalize_pbw,
    phi,
    poisson_bracket,
)
from .errors import *  # noqa: F401,F403
from .growth import (
    DimensionSeries,
    FiltrationReport,
    QuotientGrowth,
    count_spanning,
    filtration_check,
    gk_slope,
    graded_dim_quotient,
    sk_criticality_probe,
)
from .orders import OrderKind, abs_degree, compare, degree, leading_monomial, length, order_key
from .reduction import (
    POISSON,
    TWO_SIDED,
    CertificateStep,
    IdealSpec,
    NormalForm,
    Reducer,
    ReductionParams,
    compute_params,
    derivation_chain_high,
    derivation_chain_low,
    is_normal_word,
    normal_form,
    reduce_once,
    verify_certificate,
)
from .verma import (
    InducedSpec,
    ModuleVector,
    WitnessResult,
    act,
    annihilator_falsify,
    growth_of_module,
    verma_graded_dim,
)

__version__ = "0.1.0"
