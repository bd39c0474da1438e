"""Scaling-map algebra: closed forms, composition, inverses, duality.

The closed-form table is pre-flight checked against the defining
probability-matching integral before anything else trusts it as an oracle
(test_closed_form_preflight): each row must carry equal half-line masses on
both sides by independent quadrature.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgmaps import (
    CompositionError,
    DomainError,
    NotNormalizableError,
    PoleError,
    UnsupportedParametersError,
    closed_form_rows,
    compose,
    duality,
    eval_closed_form,
    eval_nested_beta,
    identity_map,
    inverse,
    make_map,
    make_qgaussian,
)
from qgmaps.verify import half_line_integral

INV_SQRT2 = 1.0 / math.sqrt(2.0)
ROW_53_75_AT_1 = 1.2907958189248391557  # sqrt(3)*19/sqrt(650)
ROW_53_2_AT_1 = 0.7071067811865475244


class TestClosedFormTable:
    def test_ten_rows(self):
        rows = closed_form_rows()
        assert len(rows) == 10
        assert set(q for q, _ in rows.values()) == {2.0, 5.0 / 3.0}

    @pytest.mark.parametrize("rid", sorted(closed_form_rows()))
    def test_closed_form_preflight(self, rid):
        # the quadrature pre-flight: each tabulated function must satisfy
        # the probability-matching identity before use as an oracle
        qs, qt = closed_form_rows()[rid]
        src = make_qgaussian(qs)
        tgt = make_qgaussian(qt)
        for z in (0.3, 1.0, 2.4):
            g = eval_closed_form(rid, z)
            lhs, _, ok1 = half_line_integral(src, g, 1e-11)
            rhs, _, ok2 = half_line_integral(tgt, z, 1e-11)
            assert ok1 and ok2
            assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_row1_value(self):
        assert eval_closed_form("2->5/3", INV_SQRT2) == pytest.approx(1.0, abs=1e-12)

    def test_rows_odd_at_zero(self):
        for rid in closed_form_rows():
            assert eval_closed_form(rid, 0.0) == 0.0
            assert eval_closed_form(rid, -1.3) == -eval_closed_form(rid, 1.3)

    def test_row_53_75_spot(self):
        assert eval_closed_form("5/3->7/5", 1.0) == pytest.approx(ROW_53_75_AT_1, rel=1e-14)

    def test_row_53_2_spot(self):
        assert eval_closed_form("5/3->2", 1.0) == pytest.approx(ROW_53_2_AT_1, rel=1e-14)

    def test_unknown_row(self):
        with pytest.raises(DomainError):
            eval_closed_form("2->3/2", 1.0)

    @pytest.mark.parametrize("rid", sorted(closed_form_rows()))
    def test_general_matches_closed_form(self, rid):
        qs, qt = closed_form_rows()[rid]
        m = make_map(qs, qt)
        for z in np.linspace(0.05, 5.0, 25):
            ref = eval_closed_form(rid, float(z))
            assert m.eval(float(z)) == pytest.approx(ref, rel=1e-8)


class TestMakeMapStrategy:
    def test_identity(self):
        m = make_map(2.0, 2.0)
        assert m.strategy == "identity"
        assert m.eval(7.3) == 7.3
        assert m.eval(-123.456) == -123.456

    def test_closed_form_selected(self):
        assert make_map(2.0, 5.0 / 3.0).strategy == "closed_form:2->5/3"
        assert make_map(5.0 / 3.0, 13.0 / 11.0).strategy == "closed_form:5/3->13/11"

    def test_general_default(self):
        assert make_map(1.3, 2.7).strategy == "general_beta"

    def test_decimal_misses_closed_form(self):
        # 1.6667 is not within 1e-12 of 5/3: falls through to the general path
        m = make_map(2.0, 1.6667)
        assert m.strategy == "general_beta"
        assert m.eval(INV_SQRT2) == pytest.approx(1.0, abs=1e-3)

    def test_extended_compact(self):
        assert make_map(0.5, 2.0).strategy == "extended_compact"
        assert make_map(2.0, -1.0).strategy == "extended_compact"

    def test_gaussian_bridge(self):
        assert make_map(1.0 + 1e-9, 2.0).strategy == "gaussian_bridge"
        assert make_map(2.0, 1.0).strategy == "gaussian_bridge"

    def test_not_normalizable(self):
        with pytest.raises(NotNormalizableError):
            make_map(3.0, 2.0)

    def test_source_target_accessors(self):
        m = make_map(2.0, 5.0 / 3.0)
        assert m.q_source.q == 2.0
        assert m.q_target.q == pytest.approx(5.0 / 3.0)


class TestEval:
    def test_zero_fixed(self):
        for m in (make_map(2.0, 5.0 / 3.0), make_map(1.3, 2.7), make_map(0.0, 2.0)):
            assert m.eval(0.0) == 0.0

    def test_row1_spot(self):
        m = make_map(2.0, 5.0 / 3.0)
        assert m.eval(INV_SQRT2) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("qs,qt", [(2.0, 5.0 / 3.0), (1.3, 2.7), (0.0, 2.0), (2.0, 0.5)])
    def test_odd_and_strictly_increasing(self, qs, qt):
        m = make_map(qs, qt)
        bound = m.target_dist.support_bound
        hi = min(5.0, 0.999 * bound)
        zs = np.linspace(-hi, hi, 201)
        vals = [m.eval(float(z)) for z in zs]
        for v1, v2 in zip(vals, vals[1:]):
            assert v2 > v1
        for z, v in zip(zs, vals):
            assert m.eval(float(-z)) == -v

    def test_eval_array_matches_scalar(self):
        m = make_map(2.0, 5.0 / 3.0)
        zs = np.linspace(-4.0, 4.0, 41)
        out = m.eval_array(zs)
        for z, v in zip(zs, out):
            assert m.eval(float(z)) == v

    def test_infinite_argument(self):
        assert make_map(2.0, 5.0 / 3.0).eval(math.inf) == math.inf
        assert make_map(0.0, 2.0).eval(math.inf) == 1.0  # compact source endpoint
        assert make_map(0.0, 2.0).eval(-math.inf) == -1.0

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            make_map(2.0, 5.0 / 3.0).eval(math.nan)

    @given(z=st.floats(-30.0, 30.0))
    @settings(max_examples=100, deadline=None)
    def test_oddness_property(self, z):
        m = make_map(2.0, 7.0 / 5.0)
        assert m.eval(-z) == -m.eval(z)


class TestNestedBetaPath:
    def test_agrees_with_canonical(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            qs, qt = rng.uniform(1.05, 2.9, size=2)
            m = make_map(float(qs), float(qt))
            for z in (0.2, 1.0, 3.5):
                lit = eval_nested_beta(m, z)
                assert lit == pytest.approx(m.eval(z), rel=1e-10)

    def test_odd(self):
        m = make_map(2.0, 5.0 / 3.0)
        assert eval_nested_beta(m, -1.0) == -eval_nested_beta(m, 1.0)
        assert eval_nested_beta(m, 0.0) == 0.0

    def test_restricted(self):
        with pytest.raises(UnsupportedParametersError):
            eval_nested_beta(make_map(0.5, 2.0), 0.3)


class TestComposition:
    def test_identity_absorption(self):
        m = make_map(2.0, 5.0 / 3.0)
        right = compose(m, identity_map(2.0))
        left = compose(identity_map(5.0 / 3.0), m)
        for z in (0.1, 0.9, 3.0):
            assert right.eval(z) == m.eval(z)
            assert left.eval(z) == m.eval(z)

    def test_inverse_composition_is_identity(self):
        # m^{-1} composed with m collapses to the identity at m's source
        m = make_map(2.0, 5.0 / 3.0)
        ident = compose(inverse(m), m)
        assert ident.q_source.q == ident.q_target.q == 2.0
        assert ident.strategy == "identity"
        for z in (0.25, 1.0, 4.0):
            assert ident.eval(z) == pytest.approx(z, abs=1e-9)
        other = compose(m, inverse(m))
        assert other.q_source.q == other.q_target.q == pytest.approx(5.0 / 3.0)
        for z in (0.25, 1.0, 4.0):
            assert other.eval(z) == pytest.approx(z, abs=1e-9)

    def test_closed_form_chain(self):
        # through-5/3 chain against the direct closed-form route
        chain = compose(make_map(5.0 / 3.0, 7.0 / 5.0), make_map(2.0, 5.0 / 3.0))
        assert chain.q_source.q == 2.0
        assert chain.q_target.q == pytest.approx(7.0 / 5.0)
        direct = make_map(2.0, 7.0 / 5.0)
        for z in np.arange(0.1, 5.0, 0.35):
            assert chain.eval(float(z)) == pytest.approx(direct.eval(float(z)), abs=1e-8)

    def test_partiality(self):
        with pytest.raises(CompositionError):
            compose(make_map(2.0, 5.0 / 3.0), make_map(2.0, 7.0 / 5.0))

    def test_endpoint_bookkeeping(self):
        c = compose(make_map(5.0 / 3.0, 1.4), make_map(2.5, 5.0 / 3.0))
        assert c.q_source.q == 2.5
        assert c.q_target.q == 1.4
        assert c.parts[0].q_target.q == 1.4  # left operand applies first


class TestInverse:
    def test_identity_inverse(self):
        ident = identity_map(1.5)
        inv = inverse(ident)
        assert inv.strategy == "identity"

    def test_swap_and_roundtrip(self):
        m = make_map(2.0, 5.0 / 3.0)
        mi = inverse(m)
        assert mi.q_source.q == pytest.approx(5.0 / 3.0)
        assert mi.q_target.q == 2.0
        assert mi.eval(m.eval(1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_double_inverse(self):
        m = make_map(1.3, 2.4)
        mm = inverse(inverse(m))
        for z in (0.2, 1.1, 2.7):
            assert mm.eval(z) == m.eval(z)

    def test_composed_inverse(self):
        chain = compose(make_map(5.0 / 3.0, 7.0 / 5.0), make_map(2.0, 5.0 / 3.0))
        ci = inverse(chain)
        for z in (0.4, 1.7):
            assert ci.eval(chain.eval(z)) == pytest.approx(z, abs=1e-9)


class TestExtended:
    def test_compact_identity(self):
        m = make_map(0.0, 0.0)
        assert m.strategy == "identity"
        assert m.eval(0.37) == 0.37

    def test_compact_source_limit(self):
        m = make_map(0.0, 2.0)
        assert m.eval(1e9) == pytest.approx(1.0, abs=1e-4)
        assert abs(m.eval(1e9)) < 1.0

    def test_compact_target_domain(self):
        m = make_map(2.0, 0.0)  # target support [-1, 1]
        with pytest.raises(DomainError):
            m.eval(1.5)
        assert m.eval(1.0) == math.inf  # source support endpoint
        assert m.eval(-1.0) == -math.inf

    def test_compact_to_compact(self):
        m = make_map(-1.0, 0.5)
        l_tgt = m.target_dist.support_bound
        l_src = m.source_dist.support_bound
        assert m.eval(l_tgt) == l_src
        zs = np.linspace(-0.99 * l_tgt, 0.99 * l_tgt, 41)
        vals = m.eval_array(zs)
        assert np.all(np.abs(vals) < l_src)
        assert np.all(np.diff(vals) > 0)

    def test_preserves_probability_across_regimes(self):
        m = make_map(0.5, 2.0)
        for z in (0.3, 1.0, 8.0):
            g = m.eval(z)
            lhs, _, ok1 = half_line_integral(m.source_dist, g, 1e-10)
            rhs, _, ok2 = half_line_integral(m.target_dist, z, 1e-10)
            assert ok1 and ok2
            assert lhs == pytest.approx(rhs, abs=1e-9)


class TestDuality:
    def test_fixed_point_exact(self):
        assert duality(1.0) == 1.0

    def test_minus_one(self):
        assert duality(-1.0) == 1.5

    def test_example_values(self):
        assert duality(0.0) == pytest.approx(1.4, rel=1e-15)
        assert duality(0.9) == pytest.approx(25.0 / 23.0, rel=1e-14)

    def test_symbolic_minus_infinity(self):
        assert duality(-math.inf) == pytest.approx(5.0 / 3.0, rel=1e-15)

    @pytest.mark.parametrize("q", [-5.0, -1.0, 0.0, 0.5, 0.9, 1.0])
    def test_involution(self, q):
        assert duality(duality(q)) == pytest.approx(q, abs=1e-12)

    def test_maps_compact_onto_finite_variance_band(self):
        for q in (-50.0, -3.0, 0.0, 1.0):
            fq = duality(q)
            assert 1.0 <= fq <= 5.0 / 3.0

    def test_pole(self):
        with pytest.raises(PoleError):
            duality(5.0 / 3.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            duality(2.0)
        with pytest.raises(DomainError):
            duality(math.inf)

    def test_duality_extends_transform_family(self):
        # the duality image pairs with the groupoid maps: a compact member
        # connects to its dual heavy member and on to any third index
        q = 0.0
        fq = duality(q)
        through = compose(make_map(fq, 2.0), make_map(q, fq))
        direct = make_map(q, 2.0)
        for z in (0.4, 1.0, 3.0):
            assert through.eval(z) == pytest.approx(direct.eval(z), abs=1e-9)
