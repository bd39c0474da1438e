"""Scalar numerical kernels.

Plain-float routines behind the public specfun/qgauss surfaces. Everything
here is branch-heavy loop code, so the hot kernels are jit-compiled with
numba when it is available; the pure-Python definitions are the fallback.

Numerical conventions used throughout:

* Incomplete-beta arguments travel as a dual (x, xc) with xc = 1 - x
  computed by the caller on whichever side is exactly representable.
  This keeps tail evaluations relatively accurate where the plain double
  1 - x would round to 0 or 1.
* Front factors use the small-side logarithm (log of the tiny dual,
  log1p of the large one), so b*log(1-x) does not lose digits for huge b.
"""

import math

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an optional speedup
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


_FPMIN = 1e-300
_CF_EPS = 1e-16
_CF_MAX_ITER = 50000
_SERIES_MAX_TERMS = 5000000
_NEWTON_CAP = 200  # iteration cap for the beta inverse
_SMALL_PARAM = 0.8  # below this a/b, series paths beat the continued fraction


@njit(cache=True)
def lgamma_ratio(z, a):
    # ln Gamma(z+a) - ln Gamma(z) for z >= 1e4, |a| <= 20: Stirling difference.
    # Direct lgamma subtraction cancels ~10 digits at z ~ 1e8.
    t1 = a * (a - 1.0) / (2.0 * z)
    t2 = -a * (a - 1.0) * (2.0 * a - 1.0) / (12.0 * z * z)
    t3 = (a * a) * (a - 1.0) * (a - 1.0) / (12.0 * z ** 3)
    b5 = a ** 5 - 2.5 * a ** 4 + (5.0 / 3.0) * a ** 3 - a / 6.0
    t4 = -b5 / (20.0 * z ** 4)
    return a * math.log(z) + t1 + t2 + t3 + t4


@njit(cache=True)
def log_beta(a, b):
    lo = a if a <= b else b
    hi = b if a <= b else a
    if hi >= 1e4 and lo <= 20.0:
        return math.lgamma(lo) - lgamma_ratio(hi, lo)
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


@njit(cache=True)
def _betacf(a, b, x):
    # Modified Lentz continued fraction (Numerical Recipes form).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


@njit(cache=True)
def _log_small_side(x, xc):
    # log(x) evaluated from whichever dual is exactly known
    if x <= 0.5:
        return math.log(x)
    return math.log1p(-xc)


@njit(cache=True)
def _series_lower(a, b, x, xc, lbeta):
    # I_x(a,b) = x^a/(a B) * 2F1(a, 1-b; a+1; x); safe for small a below the
    # branch point, where b*x stays bounded and terms decay fast.
    term = 1.0 / a
    total = term
    for k in range(_SERIES_MAX_TERMS):
        term *= (k + 1.0 - b) * x * (a + k) / ((k + 1.0) * (a + k + 1.0))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    lx = _log_small_side(x, xc)
    return math.exp(a * lx - lbeta) * total


@njit(cache=True)
def _stable_upper(a, b, x, xc, lbeta):
    # I_x(a,b) for x above the branch point with small b. Splits B_x into
    # B_{1/2} plus the piece over (1/2, x); the k = 0 piece goes through
    # expm1 so nothing cancels even as b -> 0 with x -> 1.
    # B_{1/2}(a,b) by the lower series at x = 1/2
    term = 1.0 / a
    s_half = term
    for k in range(_SERIES_MAX_TERMS):
        term *= (k + 1.0 - b) * 0.5 * (a + k) / ((k + 1.0) * (a + k + 1.0))
        s_half += term
        if abs(term) <= 1e-17 * abs(s_half):
            break
    b_half = math.exp(a * math.log(0.5)) * s_half

    # piece over (xc, 1/2) in the mirrored variable, term k = 0 via expm1
    lxc = _log_small_side(xc, x)
    ln_half = -0.6931471805599453
    piece = (math.expm1(b * ln_half) - math.expm1(b * lxc)) / b
    ck = 1.0
    p2 = math.exp(b * ln_half)
    px = math.exp(b * lxc)
    for k in range(1, _SERIES_MAX_TERMS):
        ck *= (k - a) / k
        p2 *= 0.5
        px *= xc
        t = ck * (p2 - px) / (b + k)
        piece += t
        if abs(t) <= 1e-17 * (abs(piece) + abs(b_half)):
            break
    return (b_half + piece) * math.exp(-lbeta)


@njit(cache=True)
def betainc_raw(a, b, x, xc, lbeta):
    """Regularized incomplete beta I_x(a,b) from the dual pair (x, xc)."""
    if x <= 0.0:
        return 0.0
    if xc <= 0.0:
        return 1.0
    thr = (a + 1.0) / (a + b + 2.0)
    if x < thr:
        if a <= _SMALL_PARAM:
            return _series_lower(a, b, x, xc, lbeta)
        lx = _log_small_side(x, xc)
        lxc = _log_small_side(xc, x)
        front = math.exp(a * lx + b * lxc - lbeta)
        return front * _betacf(a, b, x) / a
    # above the branch point, I is not small for a > 8 (the mass center
    # a/(a+b) lies above thr), so the complement CF loses nothing there;
    # the split series is reserved for small a where its binomial
    # coefficients stay O(1)
    if b <= _SMALL_PARAM and a <= 8.0:
        return _stable_upper(a, b, x, xc, lbeta)
    lx = _log_small_side(x, xc)
    lxc = _log_small_side(xc, x)
    front = math.exp(a * lx + b * lxc - lbeta)
    return 1.0 - front * _betacf(b, a, xc) / b


@njit(cache=True)
def _inv_newton(a, b, y, lbeta, complement):
    # Solve I_x(a,b) = y with the unknown parameterized by whichever dual
    # component is small at the root: v = x when complement is False,
    # v = 1 - x otherwise. v stays in (0, 1/2], so v itself is exact and
    # the other component 1 - v costs at most one ulp. The equation side
    # (y is the smaller flank) was chosen by the caller, so |f| noise is
    # relative to y. Newton with a power-law seed; bisection (log-space
    # while the bracket spans decades) is the safeguard.
    lo = 0.0
    hi = 0.5
    if complement:
        # root v solves I_{1-v}(a,b) = y, i.e. the v -> 0 flank of (b, a)
        ls = (math.log1p(-y) + math.log(b) + lbeta) / b
    else:
        ls = (math.log(y) + math.log(a) + lbeta) / a
    if ls < -644.0:
        # root below ~1e-280: the one-term asymptotic is exact to double
        return math.exp(ls)
    v = math.exp(ls) if ls < -0.7 else 0.25
    if not (0.0 < v < 0.5):
        v = 0.25
    best_v = v
    best_f = 1e308
    for _ in range(_NEWTON_CAP):
        if complement:
            f = betainc_raw(a, b, 1.0 - v, v, lbeta) - y
        else:
            f = betainc_raw(a, b, v, 1.0 - v, lbeta) - y
        af = abs(f)
        if af < best_f:
            best_f = af
            best_v = v
        if af <= 3e-16 * y:
            return v
        # I is increasing in x: in v-space the slope flips for the complement
        rising = f < 0.0 if not complement else f > 0.0
        if rising:
            lo = v
        else:
            hi = v
        if complement:
            lpdf = (a - 1.0) * math.log1p(-v) + (b - 1.0) * math.log(v) - lbeta
        else:
            lpdf = (a - 1.0) * math.log(v) + (b - 1.0) * math.log1p(-v) - lbeta
        took_newton = False
        if lpdf < 700.0:
            pdf = math.exp(lpdf)
            if pdf > 0.0 and math.isfinite(pdf):
                vn = v - f / pdf if not complement else v + f / pdf
                if lo < vn < hi:
                    if abs(vn - v) <= 2e-16 * vn:
                        return vn
                    v = vn
                    took_newton = True
        if not took_newton:
            if lo == 0.0:
                v = hi * 0.01
            elif hi / lo > 4.0:
                v = math.sqrt(lo * hi)
            else:
                v = 0.5 * (lo + hi)
            if v <= lo or v >= hi:
                return best_v
        if lo > 0.0 and hi - lo <= 4e-16 * lo:
            return best_v
    return best_v


@njit(cache=True)
def _inv_core(a, b, y, lbeta):
    # y is the smaller probability flank; the root may still sit on either
    # side of 1/2 (for b -> 0 even mid probabilities have roots hugging 1),
    # so pick the solution variable by comparing with I_{1/2}
    y_half = betainc_raw(a, b, 0.5, 0.5, lbeta)
    if y == y_half:
        return 0.5, 0.5
    if y < y_half:
        x = _inv_newton(a, b, y, lbeta, False)
        return x, 1.0 - x
    w = _inv_newton(a, b, y, lbeta, True)
    return 1.0 - w, w


@njit(cache=True)
def betainc_inv_raw(a, b, y, yc, lbeta):
    """Inverse of I_.(a,b): returns the dual (x, xc) with I_x = y.

    The equation is solved on whichever probability flank is smaller (the
    direct I_x(a,b) = y or the mirrored I_w(b,a) = yc) and in whichever
    variable (x or 1-x) is small at the root, so the returned dual carries
    full relative accuracy on the informative side even where the other
    component rounds to 0 or 1.
    """
    if y <= 0.0:
        return 0.0, 1.0
    if yc <= 0.0:
        return 1.0, 0.0
    if yc < y:
        w, wc = _inv_core(b, a, yc, lbeta)
        return wc, w
    return _inv_core(a, b, y, lbeta)


@njit(cache=True)
def inv_tail_log(a, b, yc, lbeta):
    # log of the complement dual xc solving I_x(a,b) = 1 - yc, for yc so
    # small that xc underflows: one-term asymptotic, exact at that scale.
    return (math.log(yc) + math.log(b) + lbeta) / b


_SQRT_PI = 1.7724538509055160273


@njit(cache=True)
def inv_erf_dual(t, tc):
    # t in [0, 1), tc = 1 - t supplied by the caller on its accurate side;
    # bracketed Newton on erf (or erfc when the tail is thin).
    if t == 0.0:
        return 0.0
    lo = 0.0
    hi = 6.0
    if t < 0.9:
        x = 0.5 * _SQRT_PI * t * (1.0 + math.pi * t * t / 12.0)
    else:
        x = math.sqrt(-math.log(tc * (1.0 + t)))
    if not (lo < x < hi):
        x = 1.0
    for _ in range(100):
        if tc < 0.1:
            f = tc - math.erfc(x)  # same sign convention as erf(x) - t
        else:
            f = math.erf(x) - t
        if f == 0.0:
            break
        if f > 0.0:
            hi = x
        else:
            lo = x
        dpdf = 1.1283791670955126 * math.exp(-x * x)  # 2/sqrt(pi) e^{-x^2}
        xn = x - f / dpdf if dpdf > 0.0 else 0.5 * (lo + hi)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 1e-16 * max(abs(xn), 1e-3):
            x = xn
            break
        x = xn
    return x


@njit(cache=True)
def inv_erf_newton(y):
    if y == 0.0:
        return 0.0
    t = abs(y)
    return math.copysign(inv_erf_dual(t, 1.0 - t), y)


@njit(cache=True)
def hyp2f1_series(a, b, c, z):
    # plain Gauss series; caller guarantees |z| < 1 and c not a nonpositive
    # integer. Terminates early for polynomial cases (b a nonpositive integer).
    term = 1.0
    total = 1.0
    for k in range(_SERIES_MAX_TERMS):
        term *= (a + k) * (b + k) * z / ((c + k) * (k + 1.0))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise RuntimeError("hypergeometric series did not converge")


# ---------------------------------------------------------------------------
# q-Gaussian scalar kernels. Regime codes: 0 gaussian bridge, 1 heavy tail
# (1 < q < 3), 2 compact (q < 1). Parameters a, b, lbeta, y_half are the
# induced incomplete-beta data (unused in the gaussian regime).
#
# Half-line probabilities travel as a dual (y, yc); yc is evaluated through
# the mirrored incomplete beta (or erfc), so thin tails keep relative
# accuracy. Map evaluation composes cdf and quantile through this dual and
# never materializes the probability as a single double, which would
# quantize the tail at ulp(1) and blow up inverse round trips near q = 1.
# ---------------------------------------------------------------------------

REGIME_GAUSSIAN = 0
REGIME_HEAVY = 1
REGIME_COMPACT = 2


@njit(cache=True)
def qg_halfprob_dual(z, beta, qm1, regime, a, b, lbeta):
    # (y, yc) with y = 2|F(z) - 1/2| for the member's own |z|
    az = abs(z)
    if regime == 0:
        arg = math.sqrt(beta) * az
        return math.erf(arg), math.erfc(arg)
    if regime == 1:
        if az > 1e125:
            # z*z can overflow and xc = 1/w can go subnormal, but for q
            # near 3 the tail is still fat: one-term asymptotic of
            # I_{xc}(b, a) in log form, exact at this scale
            lxc = -(math.log(qm1 * beta) + 2.0 * math.log(az))
            lyc = b * lxc - math.log(b) - lbeta
            yc = math.exp(lyc) if lyc > -745.0 else 0.0
            return 1.0 - yc, yc
        w = qm1 * beta * az * az
        x = w / (1.0 + w)
        xc = 1.0 / (1.0 + w)
        y = betainc_raw(a, b, x, xc, lbeta)
        yc = betainc_raw(b, a, xc, x, lbeta)
        return y, yc
    x = -qm1 * beta * az * az
    if x >= 1.0:
        return 1.0, 0.0
    xc = 1.0 - x
    return betainc_raw(a, b, x, xc, lbeta), betainc_raw(b, a, xc, x, lbeta)


@njit(cache=True)
def qg_cdf(z, beta, qm1, regime, a, b, lbeta):
    if regime == 0:
        return 0.5 * (1.0 + math.erf(math.sqrt(beta) * z))
    if regime == 1:
        y, _ = qg_halfprob_dual(z, beta, qm1, regime, a, b, lbeta)
        i = y
    else:
        x = -qm1 * beta * z * z  # (1-q) beta z^2
        if x >= 1.0:
            i = 1.0
        else:
            i = betainc_raw(a, b, x, 1.0 - x, lbeta)
    return 0.5 + math.copysign(0.5 * i, z)


@njit(cache=True)
def qg_quantile_dual(y, yc, sgn, beta, qm1, regime, a, b, lbeta):
    # quantile from the dual half-line probability; sgn carries the side
    if y <= 0.0:
        return 0.0
    if regime == 0:
        if yc <= 0.0:
            return sgn * math.inf
        return sgn * inv_erf_dual(y, yc) / math.sqrt(beta)
    if regime == 1:
        if yc <= 0.0:
            return sgn * math.inf
        if yc < y:
            lw = inv_tail_log(a, b, yc, lbeta)
            if lw < -644.0:
                # xc underflows; z comes straight from the log asymptotic
                return sgn * math.exp(-0.5 * lw) / math.sqrt(qm1 * beta)
        x, xc = betainc_inv_raw(a, b, y, yc, lbeta)
        if xc <= 0.0:
            return sgn * math.inf
        return sgn * math.sqrt(x / (xc * qm1 * beta))
    x, _ = betainc_inv_raw(a, b, y, yc, lbeta)
    return sgn * math.sqrt(x / (-qm1 * beta))


@njit(cache=True)
def qg_quantile(p, beta, qm1, regime, a, b, lbeta):
    # y and yc are exact doubles derived from p (Sterbenz), so the beta
    # inverse sees full precision on both flanks.
    if p == 0.5:
        return 0.0
    y = abs(2.0 * p - 1.0)
    yc = 2.0 * min(p, 1.0 - p)
    sgn = 1.0 if p > 0.5 else -1.0
    return qg_quantile_dual(y, yc, sgn, beta, qm1, regime, a, b, lbeta)


@njit(cache=True)
def qg_quantile_batch(ps, beta, qm1, regime, a, b, lbeta):
    out = ps.copy()
    for i in range(ps.shape[0]):
        out[i] = qg_quantile(ps[i], beta, qm1, regime, a, b, lbeta)
    return out


@njit(cache=True)
def qg_cdf_batch(zs, beta, qm1, regime, a, b, lbeta):
    out = zs.copy()
    for i in range(zs.shape[0]):
        out[i] = qg_cdf(zs[i], beta, qm1, regime, a, b, lbeta)
    return out


@njit(cache=True)
def map_eval(z,
             t_beta, t_qm1, t_regime, t_a, t_b, t_lbeta,
             s_beta, s_qm1, s_regime, s_a, s_b, s_lbeta,
             s_bound):
    # quantile_source(cdf_target(z)) through the dual representation;
    # s_bound is the source support endpoint (inf unless compact), used
    # when the target probability saturates completely (yc underflows)
    if z == 0.0:
        return 0.0
    sgn = 1.0 if z > 0.0 else -1.0
    y, yc = qg_halfprob_dual(z, t_beta, t_qm1, t_regime, t_a, t_b, t_lbeta)
    if yc <= 0.0:
        return sgn * s_bound
    return qg_quantile_dual(y, yc, sgn, s_beta, s_qm1, s_regime,
                            s_a, s_b, s_lbeta)


@njit(cache=True)
def map_eval_batch(zs,
                   t_beta, t_qm1, t_regime, t_a, t_b, t_lbeta,
                   s_beta, s_qm1, s_regime, s_a, s_b, s_lbeta,
                   s_bound):
    out = zs.copy()
    for i in range(zs.shape[0]):
        out[i] = map_eval(zs[i],
                          t_beta, t_qm1, t_regime, t_a, t_b, t_lbeta,
                          s_beta, s_qm1, s_regime, s_a, s_b, s_lbeta,
                          s_bound)
    return out
