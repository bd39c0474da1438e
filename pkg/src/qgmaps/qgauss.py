"""The q-Gaussian family: density, normalization, CDF, quantile, sampling.

A member with entropic index q and scale beta has density

    G_q(x) = (1/Z) * [1 - (1-q) beta x^2]^{1/(1-q)}

normalizable for q < 3. Three regimes drive every formula:

* compact (q < 1): support is [-L, L] with L = 1/sqrt((1-q) beta), density
  defined as 0 outside;
* gaussian (|q - 1| <= 1e-8): the q -> 1 limit exp(-beta x^2), used as a
  bridge because the induced beta parameter b = 1/(q-1) - 1/2 blows up;
* heavy tail (1 < q < 3): power-law tails, finite variance only below 5/3.

Half-line probabilities reduce to the regularized incomplete beta, which is
what the scaling-map layer builds on:

    integral_0^z G_q = (1/2) I_x(1/2, b),  x = (q-1) beta z^2 / (1 + (q-1) beta z^2)

for the heavy-tail regime, and with x = (1-q) beta z^2 (clamped to [0,1]),
b = (2-q)/(1-q) for the compact regime. The compact-branch parameters are
not tabulated anywhere; they follow from the substitution u = (1-q) beta x^2
and are validated against quadrature in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, NotNormalizableError
from .specfun import BetaParams

__all__ = [
    "GAUSSIAN_BRIDGE_EPS",
    "COMPACT",
    "GAUSSIAN",
    "HEAVY_TAIL",
    "QIndex",
    "QGaussian",
    "make_qgaussian",
    "norm_const",
]

GAUSSIAN_BRIDGE_EPS = 1e-8

COMPACT = "compact"
GAUSSIAN = "gaussian"
HEAVY_TAIL = "heavy_tail"

_REGIME_CODE = {GAUSSIAN: _kernels.REGIME_GAUSSIAN,
                HEAVY_TAIL: _kernels.REGIME_HEAVY,
                COMPACT: _kernels.REGIME_COMPACT}


def classify_regime(q: float) -> str:
    if abs(q - 1.0) <= GAUSSIAN_BRIDGE_EPS:
        return GAUSSIAN
    return COMPACT if q < 1.0 else HEAVY_TAIL


@dataclass(frozen=True)
class QIndex:
    """A validated entropic index with its regime label."""

    q: float
    regime: str = field(init=False)

    def __post_init__(self):
        q = self.q
        if not (isinstance(q, (int, float)) and math.isfinite(q)):
            raise DomainError(f"entropic index must be a finite real, got {q!r}")
        if q >= 3.0:
            raise NotNormalizableError(
                f"q = {q} >= 3: the q-Gaussian is not normalizable")
        object.__setattr__(self, "q", float(q))
        object.__setattr__(self, "regime", classify_regime(float(q)))


def as_qindex(q) -> QIndex:
    return q if isinstance(q, QIndex) else QIndex(float(q))


def _beta_params_for(index: QIndex) -> BetaParams | None:
    if index.regime == HEAVY_TAIL:
        return BetaParams(0.5, 1.0 / (index.q - 1.0) - 0.5)
    if index.regime == COMPACT:
        return BetaParams(0.5, (2.0 - index.q) / (1.0 - index.q))
    return None


def norm_const(index, beta_scale: float = 1.0) -> float:
    """Normalization Z of the q-Gaussian with the given index and scale."""
    index = as_qindex(index)
    if not (isinstance(beta_scale, (int, float)) and beta_scale > 0 and math.isfinite(beta_scale)):
        raise DomainError(f"beta_scale must be finite and > 0, got {beta_scale!r}")
    beta_scale = float(beta_scale)
    q = index.q
    if index.regime == GAUSSIAN:
        return math.sqrt(math.pi / beta_scale)
    p = _beta_params_for(index)
    if index.regime == HEAVY_TAIL:
        return math.exp(p.log_beta) / math.sqrt((q - 1.0) * beta_scale)
    return math.exp(p.log_beta) / math.sqrt((1.0 - q) * beta_scale)


@dataclass(frozen=True)
class QGaussian:
    """Immutable distribution record; construct through make_qgaussian."""

    index: QIndex
    beta_scale: float
    norm: float
    support_bound: float
    # cached kernel arguments: (qm1, regime_code, a, b, lbeta)
    _kp: tuple = field(repr=False, compare=False, default=())

    @property
    def q(self) -> float:
        return self.index.q

    def pdf(self, x: float) -> float:
        """Density at x; identically 0 outside the support for q < 1."""
        x = float(x)
        if math.isnan(x):
            raise DomainError("pdf argument is NaN")
        if math.isinf(x):
            return 0.0
        q = self.index.q
        b = self.beta_scale
        if self.index.regime == GAUSSIAN:
            return math.exp(-b * x * x) / self.norm
        if self.index.regime == HEAVY_TAIL:
            if abs(x) > 1e150:
                # x*x would overflow; 1 + w == w at this scale
                lw = math.log((q - 1.0) * b) + 2.0 * math.log(abs(x))
                return math.exp(-lw / (q - 1.0)) / self.norm
            w = (q - 1.0) * b * x * x
            return math.exp(-math.log1p(w) / (q - 1.0)) / self.norm
        if abs(x) >= self.support_bound:
            return 0.0
        u = (1.0 - q) * b * x * x
        if u >= 1.0:
            return 0.0
        return math.exp(math.log1p(-u) / (1.0 - q)) / self.norm

    def cdf(self, z: float) -> float:
        z = float(z)
        if math.isnan(z):
            raise DomainError("cdf argument is NaN")
        if math.isinf(z):
            return 0.0 if z < 0 else 1.0
        qm1, code, a, bb, lbeta = self._kp
        return _kernels.qg_cdf(z, self.beta_scale, qm1, code, a, bb, lbeta)

    def quantile(self, p: float) -> float:
        if not (isinstance(p, (int, float)) and 0.0 < p < 1.0):
            raise DomainError(f"quantile requires p in (0, 1), got {p!r}")
        qm1, code, a, bb, lbeta = self._kp
        return _kernels.qg_quantile(float(p), self.beta_scale, qm1, code,
                                    a, bb, lbeta)

    def cdf_array(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.float64)
        qm1, code, a, bb, lbeta = self._kp
        return _kernels.qg_cdf_batch(np.ascontiguousarray(zs), self.beta_scale,
                                     qm1, code, a, bb, lbeta)

    def quantile_array(self, ps: np.ndarray) -> np.ndarray:
        ps = np.asarray(ps, dtype=np.float64)
        if ps.size and (np.nanmin(ps) <= 0.0 or np.nanmax(ps) >= 1.0):
            raise DomainError("quantile requires all p in (0, 1)")
        qm1, code, a, bb, lbeta = self._kp
        return _kernels.qg_quantile_batch(ps, self.beta_scale, qm1, code,
                                          a, bb, lbeta)

    def sample(self, n: int, seed: int) -> np.ndarray:
        """n deterministic draws: quantile(u) with u from a Philox stream.

        The uniform source is the Philox4x64-10 counter-based generator
        (numpy.random.Philox) keyed by the seed; each uniform is
        (k + 1/2) * 2^-53 for a 53-bit draw k, so u lies strictly inside
        (0, 1). Fixed seed gives identical output across runs and platforms.
        """
        if not (isinstance(n, (int, np.integer)) and n >= 1):
            raise DomainError(f"sample size must be a positive integer, got {n!r}")
        rng = np.random.Generator(np.random.Philox(int(seed)))
        k = rng.integers(0, 1 << 53, size=int(n), dtype=np.uint64)
        u = (k.astype(np.float64) + 0.5) * 2.0 ** -53
        return self.quantile_array(u)


def make_qgaussian(q, beta_scale: float = 1.0) -> QGaussian:
    """Build a QGaussian record with its normalization and support bound."""
    index = as_qindex(q)
    z = norm_const(index, beta_scale)
    beta_scale = float(beta_scale)
    if index.regime == COMPACT:
        bound = 1.0 / math.sqrt((1.0 - index.q) * beta_scale)
    else:
        bound = math.inf
    p = _beta_params_for(index)
    if p is None:
        kp = (0.0, _kernels.REGIME_GAUSSIAN, 0.0, 0.0, 0.0)
    else:
        kp = (index.q - 1.0, _REGIME_CODE[index.regime], p.a, p.b, p.log_beta)
    return QGaussian(index=index, beta_scale=beta_scale, norm=z,
                     support_bound=bound, _kp=kp)
