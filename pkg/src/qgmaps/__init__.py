"""qgmaps: q-Gaussian distributions and the scaling maps between them.

The package provides the q-Gaussian family for every normalizable index
q < 3 (density, normalization, cdf, quantile, seeded sampling), the
probability-preserving scaling maps gamma that carry one member onto
another, their composition algebra (a transformation groupoid: partial
composition, associativity, identity, inverses), the duality involution
(7 - 5q)/(5 - 3q), the tabulated elementary closed forms, and a
verification harness that re-derives every identity numerically.
"""

from .errors import (
    CompositionError,
    ConvergenceError,
    DomainError,
    NotNormalizableError,
    PoleError,
    QGMapsError,
    UnsupportedParametersError,
)
from .groupoid import (
    ScalingMap,
    closed_form_rows,
    compose,
    duality,
    eval_closed_form,
    eval_nested_beta,
    identity_map,
    inverse,
    make_map,
)
from .qgauss import (
    COMPACT,
    GAUSSIAN,
    GAUSSIAN_BRIDGE_EPS,
    HEAVY_TAIL,
    QGaussian,
    QIndex,
    make_qgaussian,
    norm_const,
)
from .specfun import (
    BetaParams,
    beta_fn,
    erf,
    gauss_2f1_restricted,
    inv_erf,
    inv_reg_inc_beta,
    log_gamma,
    reg_inc_beta,
)

__version__ = "0.1.0"

__all__ = [
    "BetaParams",
    "COMPACT",
    "CompositionError",
    "ConvergenceError",
    "DomainError",
    "GAUSSIAN",
    "GAUSSIAN_BRIDGE_EPS",
    "HEAVY_TAIL",
    "NotNormalizableError",
    "PoleError",
    "QGMapsError",
    "QGaussian",
    "QIndex",
    "ScalingMap",
    "UnsupportedParametersError",
    "beta_fn",
    "closed_form_rows",
    "compose",
    "duality",
    "erf",
    "eval_closed_form",
    "eval_nested_beta",
    "gauss_2f1_restricted",
    "identity_map",
    "inv_erf",
    "inv_reg_inc_beta",
    "inverse",
    "log_gamma",
    "make_map",
    "make_qgaussian",
    "norm_const",
    "reg_inc_beta",
]
