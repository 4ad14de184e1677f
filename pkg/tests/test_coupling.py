"""Coupled sample paths and the statistical verification harness."""

from __future__ import annotations

import numpy as np
import pytest

from ssdual import (
    DiscreteAbsorptionLaw,
    InsufficientSamples,
    NotStochasticLink,
    TransitionKernel,
    build_dual,
    build_link,
    build_modified_dual,
    eigenvalues,
    promotion_probability,
    simulate_coupled_continuous,
    simulate_coupled_discrete,
    simulate_general_dual,
    spectral_polynomials,
    trace_stream,
    uniformize,
    verify,
)

from test_spectral import COMPLEX4


def _skipfree_parts(kernel):
    spec = eigenvalues(kernel)
    polys = spectral_polynomials(kernel, spec)
    link = build_link(kernel, spec, polys, None)
    dual = build_dual(spec)
    return spec, link, dual


class TestTraceStream:
    def test_reproducible_per_index(self):
        a = trace_stream(9, 4).random(5)
        b = trace_stream(9, 4).random(5)
        assert np.array_equal(a, b)

    def test_distinct_indices_differ(self):
        a = trace_stream(9, 4).random(5)
        b = trace_stream(9, 5).random(5)
        assert not np.array_equal(a, b)


class TestPromotionProbability:
    def test_bd3_spot_value(self, bd3):
        spec, link, _ = _skipfree_parts(bd3)
        p = promotion_probability(spec.nonunit.real, link.rows, 0, 0)
        assert p == pytest.approx(np.sqrt(2.0) / 2.0, abs=1e-14)

    def test_forced_when_primal_touches_next_level(self, bd3):
        spec, link, _ = _skipfree_parts(bd3)
        assert promotion_probability(spec.nonunit.real, link.rows, 0, 1) == 1.0

    def test_zero_support_rejected(self, bd3):
        spec, link, _ = _skipfree_parts(bd3)
        rows = np.zeros_like(link.rows)
        with pytest.raises(NotStochasticLink):
            promotion_probability(spec.nonunit.real, rows, 0, 0)


class TestCoupledPaths:
    def test_discrete_invariants(self, bd3):
        spec, link, dual = _skipfree_parts(bd3)
        for idx in range(200):
            tr = simulate_coupled_discrete(bd3, link, dual, trace_stream(1, idx))
            primal = np.array(tr.primal_path)
            shadow = np.array(tr.dual_path)
            assert np.all(primal <= shadow)
            assert tr.t_primal == tr.t_dual
            # dual climbs by at most one level per step
            assert np.all(np.diff(shadow) >= 0) and np.all(np.diff(shadow) <= 1)
            assert tr.largest_dual == bd3.d - 1
            assert primal[-1] == bd3.d and shadow[-1] == bd3.d

    def test_continuous_invariants(self, ct21):
        kernel_u, rate = uniformize(ct21)
        spec = eigenvalues(kernel_u)
        polys = spectral_polynomials(kernel_u, spec)
        link = build_link(kernel_u, spec, polys, None)
        rates = rate * (1.0 - spec.nonunit.real)
        for idx in range(200):
            tr = simulate_coupled_continuous(ct21, link, rates, trace_stream(2, idx))
            assert tr.t_primal == tr.t_dual
            assert np.all(np.array(tr.primal_path) <= np.array(tr.dual_path))
            assert np.all(np.diff(np.array(tr.event_times)) >= 0.0)

    def test_general_dual_absorbs_with_primal(self, gen3):
        spec = eigenvalues(gen3)
        polys = spectral_polynomials(gen3, spec)
        link = build_link(gen3, spec, polys, None)
        mod = build_modified_dual(gen3, link, spec, None)
        seen_l = set()
        for idx in range(400):
            tr = simulate_general_dual(gen3, mod, trace_stream(3, idx))
            assert tr.t_primal == tr.t_dual
            assert tr.primal_path[-1] == gen3.d
            seen_l.add(tr.largest_dual)
        # GEN3 a-weights are (0, 1/3, 2/3): L takes values 0 and 1, never -1
        assert seen_l == {0, 1}


class TestVerify:
    def test_bd3_passes(self, bd3):
        rep = verify(bd3, mode="skipfree", samples=4000, seed=7)
        assert rep.passed
        assert rep.domination_violations == 0
        assert rep.absorption_mismatches == 0
        assert rep.positivity_violations == 0
        assert rep.structural_l_violations == 0
        assert rep.ks_statistic <= rep.ks_threshold
        assert rep.conditional_cells > 0
        assert rep.empirical_mean == pytest.approx(rep.exact_mean, rel=0.05)

    def test_gen3_general_passes(self, gen3):
        rep = verify(gen3, mode="general", samples=4000, seed=7)
        assert rep.passed
        assert rep.l_chisq_pvalue is not None and rep.l_chisq_pvalue > 0.01
        assert rep.segments_tested > 0
        assert rep.absorption_mismatches == 0

    def test_continuous_passes(self, ct21):
        rep = verify(ct21, mode="continuous", samples=4000, seed=7)
        assert rep.passed
        assert rep.ks_pvalue is not None and rep.ks_pvalue > 0.01
        assert rep.segments_tested > 0

    def test_deterministic_and_partition_independent(self, bd3):
        a = verify(bd3, mode="skipfree", samples=2000, seed=42)
        b = verify(bd3, mode="skipfree", samples=2000, seed=42)
        c = verify(bd3, mode="skipfree", samples=2000, seed=42, jobs=2)
        assert a.to_dict() == b.to_dict() == c.to_dict()
        assert a.absorption_times == c.absorption_times

    def test_seed_changes_report(self, bd3):
        a = verify(bd3, mode="skipfree", samples=2000, seed=42)
        b = verify(bd3, mode="skipfree", samples=2000, seed=43)
        assert a.to_dict() != b.to_dict()

    def test_insufficient_samples(self, bd3):
        with pytest.raises(InsufficientSamples):
            verify(bd3, mode="skipfree", samples=5, seed=1)

    def test_horizon_hits_fail_the_run(self, bd3):
        rep = verify(bd3, mode="skipfree", samples=2000, seed=2, horizon=4)
        assert rep.horizon_hits > 0
        assert not rep.passed

    def test_perturbed_eigenvalue_fails_ks(self, bd3):
        spec = eigenvalues(bd3)
        thetas = spec.nonunit.real.copy()
        thetas[1] += 0.017
        wrong = DiscreteAbsorptionLaw(thetas, np.array([0.0, 0.0, 1.0]))
        rep = verify(bd3, mode="skipfree", samples=20000, seed=3, law=wrong)
        assert not rep.ks_passed
        assert not rep.passed

    def test_complex_link_rejected(self):
        k = TransitionKernel(COMPLEX4)
        with pytest.raises(NotStochasticLink):
            verify(k, mode="general", samples=100, seed=1)

    def test_report_serializes_without_times(self, bd3):
        rep = verify(bd3, mode="skipfree", samples=2000, seed=5)
        d = rep.to_dict()
        assert "absorption_times" not in d
        assert d["mode"] == "skipfree" and d["samples"] == 2000
        assert len(rep.absorption_times) == 2000
