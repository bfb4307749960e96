"""q-series identity library with numeric and coefficient-exact verification."""

from .errors import (
    DomainError,
    MaxPanelsExceeded,
    NonConvergent,
    NotInvertible,
    OrderExceeded,
    OrderMismatch,
    PoleError,
    QSeriesError,
    SamplingExhausted,
)
from .exactseries import (
    FormalSeries,
    fs_extract,
    fs_from_rational,
    fs_inv,
    fs_mul,
    fs_qpoch_infinite,
    fs_var,
)
from .qcore import (
    DEFAULT_POLICY,
    ParameterPoint,
    TruncationPolicy,
    delta_theta,
    hprod,
    jackson_qintegral,
    phi_series,
    q_derivative,
    q_hermite,
    q_partial,
    qbinomial,
    qpoch_finite,
    qpoch_infinite,
    qpoch_infinite_cached,
    qpoch_multi,
    rogers_szego,
    sum_series,
)
from .identities import (
    EXACT_IDENTITIES,
    REGISTRY,
    IdentityEntry,
    IdentityReport,
    check_identity,
    evaluate_lhs,
    evaluate_rhs,
    exact_point,
    l_function,
    rho,
    sample_domain,
    sears_transform_check,
)
from .quadrature import (
    DEFAULT_QUAD,
    QuadratureConfig,
    askey_wilson_integral,
    integrate_theta,
    liu_beta_integral,
    qhermite_gf_check,
    qhermite_orthogonality,
)

__version__ = "0.1.0"
