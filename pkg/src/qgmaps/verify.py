"""Executable verification harness.

Turns the defining identities of the scaling maps into reproducible checks
with residual reporting: probability preservation (the CDF-matching
integral identity), its differential form, the hypergeometric/incomplete-
beta equivalence of the half-line integral, the four groupoid axioms, the
closed-form table, and a Kolmogorov-Smirnov pushforward test.

Every report's ``passed`` flag is exactly ``residual <= tolerance``; an
``inconclusive`` status marks quadrature that failed to converge (distinct
from a numerical failure), and ``structural`` marks partiality checks that
are about raised errors rather than residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import CompositionError, UnsupportedParametersError
from .groupoid import (
    ScalingMap,
    closed_form_rows,
    compose,
    eval_closed_form,
    identity_map,
    inverse,
    make_map,
)
from .qgauss import QGaussian, make_qgaussian
from .specfun import BetaParams, beta_fn, gauss_2f1_restricted, reg_inc_beta

__all__ = [
    "VerificationReport",
    "CheckSuite",
    "half_line_integral",
    "check_probability_preservation",
    "check_ode",
    "check_groupoid_axioms",
    "check_hypergeometric_equivalence",
    "check_closed_forms",
    "ks_statistic",
    "ks_pushforward",
    "perturbed_map",
    "run_suite",
    "SUITE_NAMES",
    "DEFAULT_HEAVY_GRID",
    "DEFAULT_COMPACT_GRID",
    "KS_CRITICAL_001",
]

# alpha = 0.01 one-sample KS critical constant: statistic threshold is
# KS_CRITICAL_001 / sqrt(n)
KS_CRITICAL_001 = 1.628

DEFAULT_HEAVY_GRID = (1.0 + 1e-6, 9.0 / 7.0, 7.0 / 5.0, 1.5, 5.0 / 3.0, 2.0, 2.5, 2.9)
DEFAULT_COMPACT_GRID = (-5.0, -1.0, 0.0, 0.5)

# probability levels generating in-support evaluation grids (see _z_grid_for)
_DEFAULT_P_LEVELS = (0.55, 0.7, 0.85, 0.95, 0.99)


@dataclass(frozen=True)
class VerificationReport:
    name: str
    inputs: tuple
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    status: str = ""

    def __post_init__(self):
        ok = bool(self.residual <= self.tolerance)
        object.__setattr__(self, "passed", ok)
        if not self.status:
            object.__setattr__(self, "status", "pass" if ok else "fail")

    def line(self) -> str:
        mark = "PASS" if self.passed else ("INCONCLUSIVE" if self.status == "inconclusive" else "FAIL")
        return (f"[{mark}] {self.name} inputs={self.inputs} "
                f"residual={self.residual:.3e} tol={self.tolerance:.3e}")


@dataclass(frozen=True)
class CheckSuite:
    name: str
    cases: tuple
    tolerance: float

    def __post_init__(self):
        if not self.cases:
            raise ValueError("CheckSuite.cases must be non-empty")
        if not self.tolerance > 0:
            raise ValueError("CheckSuite.tolerance must be positive")


# log-space integrals stop here: beyond x = e^690 every normalizable tail
# contributes < 1e-15, and exp overflows shortly after
_LOG_TAIL_END = 690.0


def half_line_integral(dist: QGaussian, z: float, epsabs: float):
    """Quadrature of the pdf over (0, z); independent of the cdf code path.

    Heavy tails are split at 1 and integrated in log space beyond it, in
    chunks short enough that the adaptive scheme holds its absolute target
    out to the gigantic image points produced by maps from near-gaussian to
    near-q=3 indices.

    Returns (value, error_estimate, converged).
    """
    if z == 0.0:
        return 0.0, 0.0, True
    if z < 0.0:
        v, e, ok = half_line_integral(dist, -z, epsabs)
        return -v, e, ok
    upper = min(z, dist.support_bound)
    total = 0.0
    err = 0.0
    ok = True

    def _quad(f, a, b):
        nonlocal total, err, ok
        res = quad(f, a, b, epsabs=epsabs / 4.0, epsrel=1e-13,
                   limit=800, full_output=1)
        if len(res) > 3:
            ok = False
        total += res[0]
        err += res[1]

    if upper <= 1.0:
        _quad(dist.pdf, 0.0, upper)
        return total, err, ok
    _quad(dist.pdf, 0.0, 1.0)
    t_end = _LOG_TAIL_END if math.isinf(upper) else min(math.log(upper), _LOG_TAIL_END)
    g = lambda t: dist.pdf(math.exp(t)) * math.exp(t)
    t = 0.0
    while t < t_end:
        t_next = min(t + 50.0, t_end)
        _quad(g, t, t_next)
        t = t_next
    return total, err, ok


def check_probability_preservation(m: ScalingMap, z: float, tol: float) -> VerificationReport:
    """|integral_0^{gamma(z)} G_src - integral_0^z G_tgt| by quadrature."""
    g = m.eval(z)
    lhs, e1, ok1 = half_line_integral(m.source_dist, g, tol / 10.0)
    rhs, e2, ok2 = half_line_integral(m.target_dist, z, tol / 10.0)
    resid = abs(lhs - rhs)
    status = "" if (ok1 and ok2) else "inconclusive"
    return VerificationReport(
        name="probability-preservation",
        inputs=(m.q_source.q, m.q_target.q, z),
        residual=resid if (ok1 and ok2) else math.nan,
        tolerance=tol,
        status=status,
    )


def check_ode(m: ScalingMap, z: float, h: float = 1e-5, tol: float = 1e-6) -> VerificationReport:
    """Relative residual of gamma'(z) G_src(gamma(z)) = G_tgt(z), central diff."""
    rhs = m.target_dist.pdf(z)
    gz = m.eval(z)
    fsrc = m.source_dist.pdf(gz)

    def _resid(step):
        d = (m.eval(z + step) - m.eval(z - step)) / (2.0 * step)
        return abs(d * fsrc - rhs) / abs(rhs)

    resid = _resid(h)
    if resid > 0.3 * tol:
        # Richardson: cancel the O(h^2) truncation term before giving up
        d1 = (m.eval(z + h) - m.eval(z - h)) / (2.0 * h)
        d2 = (m.eval(z + h / 2.0) - m.eval(z - h / 2.0)) / h
        dr = (4.0 * d2 - d1) / 3.0
        resid = min(resid, abs(dr * fsrc - rhs) / abs(rhs))
    return VerificationReport(
        name="ode-form",
        inputs=(m.q_source.q, m.q_target.q, z, h),
        residual=resid,
        tolerance=tol,
    )


# stage values along a composition are kept below this, so the absolute
# axiom tolerances stay meaningful: an ultra-heavy quantile (q near 3)
# otherwise turns a mid-range probability into a 1e20-sized coordinate
_STAGE_CAP = 1e3


def _z_grid_for(target: QGaussian, z_grid, source_dists=()):
    """Nominal grid mapped into the target support and capped in probability.

    Compact targets rescale proportionally into (-L, L); the cap clips each
    point so every source reached along the evaluation chain answers with a
    coordinate below _STAGE_CAP.
    """
    if math.isinf(target.support_bound):
        zs = [float(z) for z in z_grid]
    else:
        zmax = max(abs(float(z)) for z in z_grid)
        scale = 0.95 * target.support_bound / zmax
        zs = [float(z) * scale for z in z_grid]
    p_cap = 1.0
    for sd in source_dists:
        p_cap = min(p_cap, sd.cdf(_STAGE_CAP))
    if p_cap < 1.0:
        z_cap = target.quantile(p_cap)
        zs = [min(z, z_cap) for z in zs]
    return sorted(set(zs))


def _max_pointwise_gap(m_a, m_b, zs) -> float:
    gap = 0.0
    for z in zs:
        gap = max(gap, abs(m_a.eval(z) - m_b.eval(z)))
    return gap


def check_groupoid_axioms(q_list, z_grid, tol: float, inverse_tol: float = 1e-9):
    """One report per axiom instance over rotations of q_list.

    Closure and both Eq.-(18) parenthesizations are evaluated through the
    one-step reductions the composition theorem licenses, so each check is
    a real numerical statement rather than a structural identity of the
    lazy chain representation.
    """
    qs = [float(q) for q in q_list]
    n = len(qs)
    reports = []

    for i in range(n):
        q0, q1, q2 = qs[i], qs[(i + 1) % n], qs[(i + 2) % n]
        if len({q0, q1, q2}) < 3:
            continue
        m10 = make_map(q0, q1)   # morphism q0 -> q1, pointwise quantile_q0 o cdf_q1
        m21 = make_map(q1, q2)
        direct = make_map(q0, q2)
        zs = _z_grid_for(direct.target_dist, z_grid,
                         (m10.source_dist, m21.source_dist))
        gap = _max_pointwise_gap(compose(m21, m10), direct, zs)
        reports.append(VerificationReport("closure", (q0, q1, q2), gap, tol))

    for i in range(n):
        q0, q1, q2, q3 = qs[i], qs[(i + 1) % n], qs[(i + 2) % n], qs[(i + 3) % n]
        if len({q0, q1, q2, q3}) < 4:
            continue
        m10 = make_map(q0, q1)
        m32 = make_map(q2, q3)
        # reduce inside the parentheses first on each side, then compare
        lhs = compose(m32, make_map(q0, q2))
        rhs = compose(make_map(q1, q3), m10)
        zs = _z_grid_for(lhs.target_dist, z_grid,
                         tuple(make_qgaussian(q) for q in (q0, q1, q2)))
        gap = _max_pointwise_gap(lhs, rhs, zs)
        reports.append(VerificationReport("associativity", (q0, q1, q2, q3), gap, tol))

    for i in range(n):
        q0, q1 = qs[i], qs[(i + 1) % n]
        if q0 == q1:
            continue
        m = make_map(q0, q1)
        ident_src = identity_map(q0)
        ident_tgt = identity_map(q1)
        zs = _z_grid_for(m.target_dist, z_grid, (m.source_dist,))
        exact = max(abs(ident_tgt.eval(z) - z) for z in zs)
        reports.append(VerificationReport("identity-exact", (q1,), exact, 0.0))
        # gamma_{q'q} o gamma_{qq} = gamma_{q'q}: identity absorbed at the source
        gap_r = _max_pointwise_gap(compose(m, ident_src), m, zs)
        reports.append(VerificationReport("identity-right", (q0, q1), gap_r, tol))
        # gamma_{q'q'} o gamma_{q'q} = gamma_{q'q}: identity absorbed at the target
        gap_l = _max_pointwise_gap(compose(ident_tgt, m), m, zs)
        reports.append(VerificationReport("identity-left", (q0, q1), gap_l, tol))

    for i in range(n):
        q0, q1 = qs[i], qs[(i + 1) % n]
        if q0 == q1:
            continue
        m = make_map(q0, q1)
        minv = inverse(m)
        zs = _z_grid_for(m.target_dist, z_grid,
                         (m.source_dist, m.target_dist))
        gap = max(abs(minv.eval(m.eval(z)) - z) for z in zs)
        reports.append(VerificationReport("inverse-roundtrip", (q0, q1), gap, inverse_tol))
        zs_inv = _z_grid_for(minv.target_dist, z_grid,
                             (minv.source_dist, minv.target_dist))
        gap2 = max(abs(m.eval(minv.eval(z)) - z) for z in zs_inv)
        reports.append(VerificationReport("inverse-roundtrip", (q1, q0), gap2, inverse_tol))

    # partiality is structural: mismatched intermediates must refuse to compose
    q0, q1, q2 = qs[0], qs[1 % n], qs[2 % n]
    if q1 != q2:
        try:
            compose(make_map(q2, q0), make_map(q0, q1))
            reports.append(VerificationReport(
                "composition-partiality", (q0, q1, q2), 1.0, 0.0, status="structural"))
        except CompositionError:
            reports.append(VerificationReport(
                "composition-partiality", (q0, q1, q2), 0.0, 0.0, status="structural"))
    return reports


def check_hypergeometric_equivalence(q, z: float, tol: float = 1e-8) -> VerificationReport:
    """Two routes to the unnormalized half-line integral of G_q must agree.

    Route A: z * 2F1(1/2, 1/(q-1); 3/2; -(q-1) z^2).
    Route B: B_x(1/2, 1/(q-1) - 1/2) / (2 sqrt(q-1)) at
             x = (q-1)z^2 / (1 + (q-1)z^2).
    """
    q = float(q)
    if z == 0.0:
        return VerificationReport("hypergeometric-equivalence", (q, z), 0.0, tol)
    nu = 1.0 / (q - 1.0)
    try:
        a_path = z * gauss_2f1_restricted(0.5, nu, 1.5, -(q - 1.0) * z * z)
    except UnsupportedParametersError:
        return VerificationReport("hypergeometric-equivalence", (q, z),
                                  math.nan, tol, status="inconclusive")
    p = BetaParams(0.5, nu - 0.5)
    w = (q - 1.0) * z * z
    x = w / (1.0 + w)
    b_path = reg_inc_beta(x, p) * beta_fn(p.a, p.b) / (2.0 * math.sqrt(q - 1.0))
    resid = abs(a_path - b_path) / abs(a_path)
    return VerificationReport("hypergeometric-equivalence", (q, z), resid, tol)


def check_closed_forms(z_points=None, tol: float = 1e-8):
    """Each tabulated row against the general evaluation, relative."""
    if z_points is None:
        z_points = np.linspace(0.05, 5.0, 25)
    reports = []
    for rid, (qs, qt) in closed_form_rows().items():
        m = make_map(qs, qt)
        worst = 0.0
        for z in z_points:
            ref = eval_closed_form(rid, float(z))
            got = m.eval(float(z))
            worst = max(worst, abs(got - ref) / abs(ref))
        reports.append(VerificationReport("closed-form", (rid,), worst, tol))
    return reports


def ks_statistic(samples: np.ndarray, cdf_values: np.ndarray = None, dist: QGaussian = None) -> float:
    """One-sample Kolmogorov-Smirnov statistic against a continuous cdf."""
    s = np.sort(np.asarray(samples, dtype=np.float64))
    n = s.size
    f = dist.cdf_array(s) if cdf_values is None else np.sort(cdf_values)
    i = np.arange(1, n + 1, dtype=np.float64)
    return float(max(np.max(i / n - f), np.max(f - (i - 1.0) / n)))


def ks_pushforward(m: ScalingMap, n: int, seed: int) -> VerificationReport:
    """Samples of the target pushed through the map must follow the source.

    This is the probability integral transform restated: eval is
    quantile_source o cdf_target, so the pushforward is exact in law and
    the one-sample KS statistic must sit below the alpha = 0.01 critical
    value 1.628/sqrt(n).
    """
    if n < 1000:
        raise ValueError("pushforward check needs n >= 1000")
    ys = m.target_dist.sample(n, seed)
    xs = m.eval_array(ys)
    stat = ks_statistic(xs, dist=m.source_dist)
    crit = KS_CRITICAL_001 / math.sqrt(n)
    return VerificationReport("ks-pushforward", (m.q_source.q, m.q_target.q, n, seed),
                              stat, crit)


class _FaultInjectedMap:
    """Negative-control wrapper: scales every evaluation by (1 + rel)."""

    def __init__(self, m: ScalingMap, rel: float):
        self._m = m
        self._rel = rel
        self.q_source = m.q_source
        self.q_target = m.q_target
        self.strategy = m.strategy
        self.parts = m.parts
        self.source_dist = m.source_dist
        self.target_dist = m.target_dist

    def eval(self, z):
        return (1.0 + self._rel) * self._m.eval(z)

    def eval_array(self, zs):
        return (1.0 + self._rel) * self._m.eval_array(zs)


def perturbed_map(m: ScalingMap, rel: float):
    return _FaultInjectedMap(m, rel)


SUITE_NAMES = ("axioms", "preservation", "ode", "closed-forms",
               "hypergeometric", "pushforward", "all")

_PUSHFORWARD_MAPS = ((2.0, 5.0 / 3.0), (2.0, 7.0 / 5.0), (0.0, 2.0))


def _suite_axioms(tol, rng, fault):
    grid = DEFAULT_HEAVY_GRID + DEFAULT_COMPACT_GRID
    z_grid = (0.1, 0.5, 1.0, 2.0, 5.0)
    reports = check_groupoid_axioms(grid, z_grid, tol=tol)
    if fault:
        m10 = make_map(2.0, 5.0 / 3.0)
        m21 = make_map(5.0 / 3.0, 7.0 / 5.0)
        bad = perturbed_map(compose(m21, m10), fault)
        direct = make_map(2.0, 7.0 / 5.0)
        gap = max(abs(bad.eval(z) - direct.eval(z)) for z in z_grid)
        reports.append(VerificationReport("closure", ("fault-injected",), gap, tol))
    return reports


def _suite_preservation(tol, rng, fault, n_pairs=30):
    reports = []
    for _ in range(n_pairs):
        q, qp = rng.uniform(1.05, 2.9, size=2)
        m = make_map(q, qp)
        if fault:
            m = perturbed_map(m, fault)
        z = float(rng.choice([0.25, 1.0, 4.0]))
        reports.append(check_probability_preservation(m, z, tol))
    for rid, (qs, qt) in list(closed_form_rows().items())[:3]:
        m = make_map(qs, qt)
        if fault:
            m = perturbed_map(m, fault)
        reports.append(check_probability_preservation(m, 1.0, tol))
    return reports


def _suite_ode(tol, rng, fault, n_pairs=30):
    reports = []
    for _ in range(n_pairs):
        q, qp = rng.uniform(1.05, 2.9, size=2)
        m = make_map(q, qp)
        if fault:
            m = perturbed_map(m, fault)
        z = float(rng.uniform(0.1, 3.0))
        reports.append(check_ode(m, z, tol=tol))
    return reports


def _suite_closed_forms(tol, rng, fault):
    reports = check_closed_forms(tol=tol)
    if fault:
        m = perturbed_map(make_map(2.0, 5.0 / 3.0), fault)
        worst = max(abs(m.eval(z) - eval_closed_form("2->5/3", z)) / abs(eval_closed_form("2->5/3", z))
                    for z in (0.5, 1.0, 2.0))
        reports.append(VerificationReport("closed-form", ("fault-injected",), worst, tol))
    return reports


def _suite_hypergeometric(tol, rng, fault):
    reports = []
    for q in (1.2, 9.0 / 7.0, 5.0 / 3.0, 2.0, 2.5, 2.9):
        for z in (0.25, 1.0, 1.0 / math.sqrt(2.0), 3.0):
            rep = check_hypergeometric_equivalence(q, z, tol=tol)
            if fault and not math.isnan(rep.residual):
                rep = VerificationReport(rep.name, rep.inputs,
                                         rep.residual + abs(fault), rep.tolerance)
            reports.append(rep)
    return reports


def _suite_pushforward(tol, rng, fault, n=100000):
    reports = []
    for qs, qt in _PUSHFORWARD_MAPS:
        m = make_map(qs, qt)
        seed = int(rng.integers(1 << 31))
        if fault:
            # negative control: correct pushforward tested against the
            # wrong (target) reference cdf -- the swapped-index mistake
            ys = m.target_dist.sample(n, seed)
            xs = m.eval_array(ys)
            stat = ks_statistic(xs, dist=m.target_dist)
            reports.append(VerificationReport(
                "ks-pushforward", ("fault-swapped", qs, qt, n, seed),
                stat, KS_CRITICAL_001 / math.sqrt(n)))
        else:
            reports.append(ks_pushforward(m, n, seed))
    return reports


def run_suite(name: str, tol: float = None, seed: int = 0, fault: float = 0.0):
    """Run one named verification suite; deterministic for a fixed seed."""
    if name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    rng = np.random.default_rng(seed)
    table = {
        "axioms": lambda: _suite_axioms(tol or 1e-8, rng, fault),
        "preservation": lambda: _suite_preservation(tol or 1e-8, rng, fault),
        "ode": lambda: _suite_ode(tol or 1e-6, rng, fault),
        "closed-forms": lambda: _suite_closed_forms(tol or 1e-8, rng, fault),
        "hypergeometric": lambda: _suite_hypergeometric(tol or 1e-8, rng, fault),
        "pushforward": lambda: _suite_pushforward(tol, rng, fault),
    }
    if name == "all":
        reports = []
        for key in ("axioms", "preservation", "ode", "closed-forms",
                    "hypergeometric", "pushforward"):
            reports.extend(table[key]())
        return reports
    return table[name]()
