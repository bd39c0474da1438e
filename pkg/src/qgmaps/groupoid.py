"""Probability-preserving scaling maps between q-Gaussians.

A map ``gamma`` with source index q and target index q' equates half-line
probabilities:

    integral_0^{gamma(z)} G_q = integral_0^z G_{q'}

so pointwise ``gamma = quantile_q o cdf_{q'}``. Two direction conventions
coexist and are easy to mix up:

* as a morphism, the map is an arrow source -> target (G_q -> G_{q'});
* pointwise, data flows the other way: gamma consumes a coordinate of the
  TARGET variable and returns a coordinate of the SOURCE variable.

``ScalingMap.q_source``/``q_target`` name the morphism endpoints;
``eval`` implements the pointwise direction. Composition applies the left
operand's evaluator first and then the right operand's, which is exactly
the reversed order of ordinary function composition; the groupoid axioms
in the verification harness pin this down numerically.

Every evaluator is odd, strictly increasing, and fixes 0. The canonical
quantile-of-cdf evaluation is the primary code path; the literal nested
incomplete-beta form (``eval_nested_beta``) is kept as an independent
secondary path and the two must agree to 1e-10 on the heavy-tail regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import CompositionError, DomainError, PoleError, UnsupportedParametersError
from .qgauss import (
    COMPACT,
    GAUSSIAN,
    HEAVY_TAIL,
    QGaussian,
    QIndex,
    as_qindex,
    make_qgaussian,
)
from .specfun import BetaParams, inv_reg_inc_beta_dual, reg_inc_beta

__all__ = [
    "ScalingMap",
    "make_map",
    "identity_map",
    "compose",
    "inverse",
    "duality",
    "eval_closed_form",
    "closed_form_rows",
    "CLOSED_FORM_MATCH_TOL",
]

CLOSED_FORM_MATCH_TOL = 1e-12

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_SQRT6 = math.sqrt(6.0)


# --- Table of elementary closed forms -------------------------------------
# Each entry: row id -> (q_source, q_target, evaluator). The printed table
# these come from carries four typos, fixed here and flagged by the
# quadrature pre-flight in the test suite: the targets 9/7 and 13/11 (not
# 9/5, 13/9), the square root in the 5/3 -> 2 denominator, and the 15 in
# the 5/3 -> 7/5 numerator.

def _half_prob_53(z):
    # half-line probability of the 5/3 member
    return z / math.sqrt(6.0 + 4.0 * z * z)


def _half_prob_75(z):
    return z * (15.0 + 4.0 * z * z) / (2.0 * _SQRT2 * (5.0 + 2.0 * z * z) ** 1.5)


def _half_prob_97(z):
    z2 = z * z
    return z * (735.0 + 280.0 * z2 + 32.0 * z2 * z2) / (8.0 * _SQRT2 * (7.0 + 2.0 * z2) ** 2.5)


def _half_prob_119(z):
    z2 = z * z
    return z * (25515.0 + 4.0 * z2 * (2835.0 + 504.0 * z2 + 32.0 * z2 * z2)) / (
        16.0 * _SQRT2 * (9.0 + 2.0 * z2) ** 3.5)


def _half_prob_1311(z):
    z2 = z * z
    n = 4611915.0 + 16.0 * z2 * (139755.0 + 4.0 * z2 * (7623.0 + 792.0 * z2 + 32.0 * z2 * z2))
    return z * n / (128.0 * _SQRT2 * (11.0 + 2.0 * z2) ** 4.5)


def _row_2_53(z):
    return math.tan(math.pi * _half_prob_53(z))


def _row_2_75(z):
    return math.tan(math.pi * _half_prob_75(z))


def _row_2_97(z):
    return math.tan(math.pi * _half_prob_97(z))


def _row_2_119(z):
    return math.tan(math.pi * _half_prob_119(z))


def _row_2_1311(z):
    return math.tan(math.pi * _half_prob_1311(z))


def _row_53_2(z):
    s = math.atan(z)  # == asin(z / sqrt(1 + z^2)), stable for large z
    return _SQRT6 * s / math.sqrt(math.pi * math.pi - 4.0 * s * s)


def _row_53_75(z):
    return _SQRT3 * z * (15.0 + 4.0 * z * z) / math.sqrt(500.0 + 150.0 * z * z)


def _row_53_97(z):
    z2 = z * z
    return _SQRT3 * z * (735.0 + 280.0 * z2 + 32.0 * z2 * z2) / math.sqrt(
        1075648.0 + 456190.0 * z2 + 54880.0 * z2 * z2)


def _row_53_119(z):
    z2 = z * z
    return z * (25515.0 + 4.0 * z2 * (2835.0 + 504.0 * z2 + 32.0 * z2 * z2)) / (
        27.0 * _SQRT6 * math.sqrt(93312.0 + 45927.0 * z2 + 8568.0 * z2 * z2 + 560.0 * z2 ** 3))


def _row_53_1311(z):
    z2 = z * z
    n = 4611915.0 + 16.0 * z2 * (139755.0 + 4.0 * z2 * (7623.0 + 792.0 * z2 + 32.0 * z2 * z2))
    d = 119939072.0 + 3.0 * z2 * (21398487.0 + 32.0 * z2 * (152823.0 + 16324.0 * z2 + 672.0 * z2 * z2))
    return math.sqrt(3.0 / 22.0) * z * n / (121.0 * math.sqrt(d))


_CLOSED_FORMS = {
    "2->5/3": (Fraction(2), Fraction(5, 3), _row_2_53),
    "2->7/5": (Fraction(2), Fraction(7, 5), _row_2_75),
    "2->9/7": (Fraction(2), Fraction(9, 7), _row_2_97),
    "2->11/9": (Fraction(2), Fraction(11, 9), _row_2_119),
    "2->13/11": (Fraction(2), Fraction(13, 11), _row_2_1311),
    "5/3->2": (Fraction(5, 3), Fraction(2), _row_53_2),
    "5/3->7/5": (Fraction(5, 3), Fraction(7, 5), _row_53_75),
    "5/3->9/7": (Fraction(5, 3), Fraction(9, 7), _row_53_97),
    "5/3->11/9": (Fraction(5, 3), Fraction(11, 9), _row_53_119),
    "5/3->13/11": (Fraction(5, 3), Fraction(13, 11), _row_53_1311),
}


def closed_form_rows():
    """Row ids with their (q_source, q_target) pairs, as floats."""
    return {rid: (float(qs), float(qt)) for rid, (qs, qt, _) in _CLOSED_FORMS.items()}


def eval_closed_form(row: str, z: float) -> float:
    """Evaluate one tabulated elementary scaling function (odd in z)."""
    if row not in _CLOSED_FORMS:
        raise DomainError(f"unknown closed-form row {row!r}; known: {sorted(_CLOSED_FORMS)}")
    z = float(z)
    if math.isnan(z):
        raise DomainError("closed-form argument is NaN")
    _, _, fn = _CLOSED_FORMS[row]
    if z == 0.0:
        return 0.0
    return math.copysign(fn(abs(z)), z)


def _match_closed_form(qs: float, qt: float):
    for rid, (fs, ft, _) in _CLOSED_FORMS.items():
        if abs(qs - float(fs)) <= CLOSED_FORM_MATCH_TOL and abs(qt - float(ft)) <= CLOSED_FORM_MATCH_TOL:
            return rid
    return None


def _classify(q_source: QIndex, q_target: QIndex) -> str:
    if q_source.q == q_target.q:
        return "identity"
    rid = _match_closed_form(q_source.q, q_target.q)
    if rid is not None:
        return f"closed_form:{rid}"
    if COMPACT in (q_source.regime, q_target.regime):
        return "extended_compact"
    if GAUSSIAN in (q_source.regime, q_target.regime):
        return "gaussian_bridge"
    return "general_beta"


@dataclass(frozen=True)
class ScalingMap:
    """Morphism record: source/target indices plus the evaluation strategy.

    ``parts`` is non-empty for lazily composed maps and holds the atomic
    chain in application order (left operand of the composition first).
    """

    q_source: QIndex
    q_target: QIndex
    strategy: str
    parts: tuple = ()
    source_dist: QGaussian = field(repr=False, compare=False, default=None)
    target_dist: QGaussian = field(repr=False, compare=False, default=None)

    # -- pointwise evaluation ------------------------------------------------

    def __call__(self, z: float) -> float:
        return self.eval(z)

    def eval(self, z: float) -> float:
        """Pointwise value: carries a target coordinate to a source coordinate.

        Internally the half-line probability moves from the target cdf to
        the source quantile as a (y, 1-y) dual, never as a single double,
        so tail evaluations and inverse round trips stay accurate.
        """
        z = float(z)
        if math.isnan(z):
            raise DomainError("eval argument is NaN")
        if self.parts:
            for m in self.parts:
                z = m.eval(z)
            return z
        if self.strategy == "identity":
            return z
        tgt = self.target_dist
        src = self.source_dist
        bound_t = tgt.support_bound
        if abs(z) > bound_t:
            raise DomainError(
                f"|z| = {abs(z)} outside the compact target support (L = {bound_t})")
        if abs(z) == bound_t:  # includes z = +-inf with infinite support
            return math.copysign(src.support_bound, z)
        if z == 0.0:
            return 0.0
        t = tgt._kp
        s = src._kp
        return _kernels.map_eval(
            z,
            tgt.beta_scale, t[0], t[1], t[2], t[3], t[4],
            src.beta_scale, s[0], s[1], s[2], s[3], s[4],
            src.support_bound)

    def eval_array(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.float64)
        if self.parts:
            out = zs
            for m in self.parts:
                out = m.eval_array(out)
            return out
        if self.strategy == "identity":
            return zs.copy()
        tgt = self.target_dist
        src = self.source_dist
        if np.isfinite(tgt.support_bound) and np.any(np.abs(zs) > tgt.support_bound):
            raise DomainError("grid extends outside the compact target support")
        t = tgt._kp
        s = src._kp
        return _kernels.map_eval_batch(
            np.ascontiguousarray(zs),
            tgt.beta_scale, t[0], t[1], t[2], t[3], t[4],
            src.beta_scale, s[0], s[1], s[2], s[3], s[4],
            src.support_bound)

    # -- algebra --------------------------------------------------------------

    def inverse(self) -> "ScalingMap":
        return inverse(self)

    def compose(self, other: "ScalingMap") -> "ScalingMap":
        return compose(self, other)


def make_map(q_source, q_target) -> ScalingMap:
    """The scaling map with the given source and target indices."""
    qs = as_qindex(q_source)
    qt = as_qindex(q_target)
    return ScalingMap(
        q_source=qs,
        q_target=qt,
        strategy=_classify(qs, qt),
        source_dist=make_qgaussian(qs),
        target_dist=make_qgaussian(qt),
    )


def identity_map(q) -> ScalingMap:
    qi = as_qindex(q)
    return make_map(qi, qi)


def compose(left: ScalingMap, right: ScalingMap) -> ScalingMap:
    """Composition per the groupoid rule: left's evaluator runs first.

    Defined iff left's source index equals right's target index (the shared
    intermediate); the result maps right's source to left's target.
    """
    if left.q_source.q != right.q_target.q:
        raise CompositionError(
            f"not composable: left source q = {left.q_source.q} differs from "
            f"right target q = {right.q_target.q}")
    lparts = left.parts if left.parts else (left,)
    rparts = right.parts if right.parts else (right,)
    qs = right.q_source
    qt = left.q_target
    return ScalingMap(
        q_source=qs,
        q_target=qt,
        strategy=_classify(qs, qt),
        parts=lparts + rparts,
        source_dist=make_qgaussian(qs),
        target_dist=make_qgaussian(qt),
    )


def inverse(m: ScalingMap) -> ScalingMap:
    """The unique inverse: swaps source and target (reverses the chain)."""
    if m.parts:
        inv_parts = tuple(inverse(p) for p in reversed(m.parts))
        return ScalingMap(
            q_source=m.q_target,
            q_target=m.q_source,
            strategy=_classify(m.q_target, m.q_source),
            parts=inv_parts,
            source_dist=make_qgaussian(m.q_target),
            target_dist=make_qgaussian(m.q_source),
        )
    return make_map(m.q_target, m.q_source)


def eval_nested_beta(m: ScalingMap, z: float) -> float:
    """Literal nested incomplete-beta evaluation (secondary path).

    gamma(z) = sign(z)/sqrt(q-1) * sqrt(X/(1-X)) with
    X = I^{-1}_{Y}(1/2, b_q) and Y = I_{x'}(1/2, b_{q'}) evaluated at
    x' = (q'-1)z^2/(1+(q'-1)z^2). Only defined when both endpoints are in
    the heavy-tail regime; must agree with eval to 1e-10 there.
    """
    if m.parts or m.strategy == "identity":
        raise UnsupportedParametersError("nested-beta path applies to atomic non-identity maps")
    if m.q_source.regime != HEAVY_TAIL or m.q_target.regime != HEAVY_TAIL:
        raise UnsupportedParametersError("nested-beta path requires 1 < q, q' < 3")
    z = float(z)
    if z == 0.0:
        return 0.0
    if math.isinf(z):
        return math.copysign(math.inf, z)
    qs = m.q_source.q
    qt = m.q_target.q
    pt = BetaParams(0.5, 1.0 / (qt - 1.0) - 0.5)
    ps = BetaParams(0.5, 1.0 / (qs - 1.0) - 0.5)
    w = (qt - 1.0) * z * z
    xp = w / (1.0 + w)
    y = _kernels.betainc_raw(pt.a, pt.b, xp, 1.0 / (1.0 + w), pt.log_beta)
    big_x, big_xc = inv_reg_inc_beta_dual(y, 1.0 - y, ps)
    if big_xc <= 0.0:
        return math.copysign(math.inf, z)
    return math.copysign(math.sqrt(big_x / big_xc) / math.sqrt(qs - 1.0), z)


def duality(q) -> float:
    """The involution f(q) = (7 - 5q)/(5 - 3q) on q <= 5/3.

    Exchanges compact-support indices q <= 1 with finite-variance indices
    in [1, 5/3]; -inf is accepted symbolically and maps to 5/3. The point
    q = 5/3 is the pole of f and raises PoleError.
    """
    q = float(q)
    if math.isnan(q):
        raise DomainError("duality argument is NaN")
    if math.isinf(q):
        if q < 0:
            return 5.0 / 3.0
        raise DomainError("duality is defined on q <= 5/3 only")
    if q == 5.0 / 3.0:
        raise PoleError("q = 5/3 is the pole of the duality map")
    if q > 5.0 / 3.0:
        raise DomainError(f"duality is defined on q <= 5/3 only, got {q}")
    return (7.0 - 5.0 * q) / (5.0 - 3.0 * q)
