"""Harness behavior: report semantics, quadrature oracle, axiom checks,
pushforward statistics, and the required negative controls."""

import math

import numpy as np
import pytest

from qgmaps import compose, inverse, make_map, make_qgaussian
from qgmaps.verify import (
    DEFAULT_COMPACT_GRID,
    DEFAULT_HEAVY_GRID,
    KS_CRITICAL_001,
    CheckSuite,
    VerificationReport,
    check_groupoid_axioms,
    check_hypergeometric_equivalence,
    check_ode,
    check_probability_preservation,
    half_line_integral,
    ks_pushforward,
    ks_statistic,
    perturbed_map,
    run_suite,
)

Z_GRID = (0.1, 0.5, 1.0, 2.0, 5.0)


class TestReportTypes:
    def test_passed_is_residual_vs_tolerance(self):
        assert VerificationReport("x", (), 1e-9, 1e-8).passed
        assert not VerificationReport("x", (), 1e-7, 1e-8).passed
        assert VerificationReport("x", (), 0.0, 0.0).passed

    def test_nan_residual_fails(self):
        rep = VerificationReport("x", (), math.nan, 1e-8, status="inconclusive")
        assert not rep.passed
        assert rep.status == "inconclusive"

    def test_suite_validation(self):
        with pytest.raises(ValueError):
            CheckSuite("s", (), 1e-8)
        with pytest.raises(ValueError):
            CheckSuite("s", ((1.0,),), 0.0)


class TestHalfLineIntegral:
    def test_cauchy_quarter(self):
        d = make_qgaussian(2.0)
        val, err, ok = half_line_integral(d, 1.0, 1e-10)
        assert ok
        assert val == pytest.approx(0.25, abs=1e-10)

    def test_infinite_upper(self):
        for q in (1.0, 1.5, 2.9):
            d = make_qgaussian(q)
            val, _, ok = half_line_integral(d, math.inf, 1e-10)
            assert ok
            assert val == pytest.approx(0.5, abs=1e-9)

    def test_compact_clips(self):
        d = make_qgaussian(0.0)
        val, _, ok = half_line_integral(d, 10.0, 1e-10)
        assert ok
        assert val == pytest.approx(0.5, abs=1e-10)

    def test_odd(self):
        d = make_qgaussian(1.5)
        v_pos, _, _ = half_line_integral(d, 2.0, 1e-10)
        v_neg, _, _ = half_line_integral(d, -2.0, 1e-10)
        assert v_neg == -v_pos


class TestPreservation:
    def test_closed_row_spot(self):
        m = make_map(2.0, 5.0 / 3.0)
        rep = check_probability_preservation(m, 1.0 / math.sqrt(2.0), 1e-8)
        assert rep.passed and rep.residual <= 1e-10

    def test_zero(self):
        rep = check_probability_preservation(make_map(1.3, 2.2), 0.0, 1e-8)
        assert rep.passed and rep.residual == 0.0

    def test_random_pair(self):
        rep = check_probability_preservation(make_map(2.7, 1.1), 1.0, 1e-8)
        assert rep.passed

    def test_detects_injected_fault(self):
        m = perturbed_map(make_map(2.0, 5.0 / 3.0), 1e-4)
        rep = check_probability_preservation(m, 1.0, 1e-8)
        assert not rep.passed


class TestOde:
    def test_identity(self):
        # residual is pure finite-difference rounding noise, ~eps/h
        rep = check_ode(make_map(1.7, 1.7), 0.8)
        assert rep.passed and rep.residual <= 1e-10

    def test_closed_row(self):
        rep = check_ode(make_map(2.0, 5.0 / 3.0), 1.0)
        assert rep.passed and rep.residual <= 1e-6

    def test_near_bridge_target(self):
        rep = check_ode(make_map(2.0, 1.0 + 1e-9), 1.0, tol=1e-5)
        assert rep.passed

    def test_detects_injected_fault(self):
        rep = check_ode(perturbed_map(make_map(2.0, 5.0 / 3.0), 1e-4), 1.0)
        assert not rep.passed


class TestAxioms:
    def test_heavy_grid_passes(self):
        reports = check_groupoid_axioms((9.0 / 7.0, 7.0 / 5.0, 5.0 / 3.0, 2.0), Z_GRID, tol=1e-8)
        assert reports
        assert all(r.passed for r in reports)

    def test_full_default_grid_passes(self):
        reports = check_groupoid_axioms(DEFAULT_HEAVY_GRID + DEFAULT_COMPACT_GRID,
                                        Z_GRID, tol=1e-8)
        assert all(r.passed for r in reports)
        names = {r.name for r in reports}
        assert {"closure", "associativity", "identity-exact", "identity-left",
                "identity-right", "inverse-roundtrip", "composition-partiality"} <= names

    def test_repeated_index_identity_exact(self):
        reports = check_groupoid_axioms((2.0, 2.0, 1.5), Z_GRID, tol=1e-8)
        ident = [r for r in reports if r.name == "identity-exact"]
        assert ident and all(r.residual == 0.0 for r in ident)

    def test_partiality_is_structural(self):
        reports = check_groupoid_axioms((1.2, 1.8, 2.4), Z_GRID, tol=1e-8)
        structural = [r for r in reports if r.status == "structural"]
        assert structural and all(r.passed for r in structural)


class TestHypergeometricEquivalence:
    def test_cauchy_both_paths_give_pi_over_four(self):
        rep = check_hypergeometric_equivalence(2.0, 1.0)
        assert rep.passed and rep.residual <= 1e-12

    def test_zero(self):
        rep = check_hypergeometric_equivalence(1.4, 0.0)
        assert rep.passed and rep.residual == 0.0

    def test_five_thirds_spot(self):
        rep = check_hypergeometric_equivalence(5.0 / 3.0, 1.0 / math.sqrt(2.0))
        assert rep.passed

    def test_grid(self):
        for q in (1.2, 1.5, 2.0, 2.5, 2.9):
            for z in (0.25, 1.0, 3.0):
                assert check_hypergeometric_equivalence(q, z).passed


class TestPushforward:
    def test_identity_map(self):
        rep = ks_pushforward(make_map(1.5, 1.5), 20000, seed=9)
        assert rep.passed

    def test_closed_row(self):
        rep = ks_pushforward(make_map(2.0, 5.0 / 3.0), 100000, seed=42)
        assert rep.passed

    def test_extended(self):
        rep = ks_pushforward(make_map(0.0, 2.0), 100000, seed=43)
        assert rep.passed

    def test_swapped_map_negative_control(self):
        # building the swapped-index map and feeding it the intended
        # target's samples must fail the KS gate decisively
        qs, qt = 2.0, 5.0 / 3.0
        wrong = make_map(qt, qs)
        ys = make_qgaussian(qt).sample(100000, seed=11)
        xs = wrong.eval_array(ys)
        stat = ks_statistic(xs, dist=make_qgaussian(qs))
        assert stat > KS_CRITICAL_001 / math.sqrt(100000)

    def test_minimum_n(self):
        with pytest.raises(ValueError):
            ks_pushforward(make_map(2.0, 1.5), 10, seed=1)


class TestSuites:
    @pytest.mark.parametrize("suite", ["axioms", "preservation", "ode",
                                       "closed-forms", "hypergeometric"])
    def test_suite_passes(self, suite):
        reports = run_suite(suite, seed=42)
        assert reports
        assert all(r.passed for r in reports)

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("bogus")

    def test_deterministic(self):
        a = run_suite("preservation", seed=7)
        b = run_suite("preservation", seed=7)
        assert [(r.name, r.inputs, r.residual) for r in a] == \
               [(r.name, r.inputs, r.residual) for r in b]

    @pytest.mark.parametrize("suite", ["axioms", "preservation", "ode",
                                       "closed-forms", "hypergeometric", "pushforward"])
    def test_negative_control(self, suite):
        # injected faults of relative size 1e-4 must be detected
        reports = run_suite(suite, seed=42, fault=1e-4)
        assert any(not r.passed for r in reports)

    def test_all_collects_everything(self):
        reports = run_suite("all", seed=1)
        names = {r.name for r in reports}
        assert {"closure", "probability-preservation", "ode-form",
                "closed-form", "hypergeometric-equivalence", "ks-pushforward"} <= names
