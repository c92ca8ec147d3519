"""Varopoulos transport and isoperimetric profiles on Cayley graphs of Z^2 x|_A Z."""

from .cayley import (
    CayleyBall,
    GeneratorSet,
    custom_generators,
    default_generators,
    enumerate_ball,
    growth_series,
    neighbors,
    word_length,
)
from .domain import (
    BoundaryEdge,
    Domain,
    from_ball,
    from_box,
    gradient,
    mass,
    random_connected,
    singleton,
    translate_left,
    varopoulos_boundary,
)
from .group import (
    E,
    HEISENBERG,
    SOL,
    Z2,
    GroupElement,
    Kind,
    SL2Matrix,
    TorusBundleGroup,
    Word,
    apply,
    evaluate_word,
    inverse,
    matrix_power,
    multiply,
)
from .profiler import (
    Family,
    ProfileParams,
    ProfilePoint,
    ProfileReport,
    exponential_growth_rate,
    fit_loglog_slope,
    fit_nlogn_ratios,
    growth_exponent,
    isoperimetric_profile,
)
from .transport import (
    TransportReport,
    average_transport,
    find_witness,
    select_radius,
    transport,
    transport_set_difference,
    verify_bounds,
)
