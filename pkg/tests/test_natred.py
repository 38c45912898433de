import numpy as np
import pytest

from gospaces import builders as B
from gospaces import catalog
from gospaces.gocheck import check_go, linear_graph_fit
from gospaces.liealg import homogeneous_space
from gospaces.natred import (
    NatRedMetric,
    check_kostant,
    check_natred_identity,
    decompose_ideals,
    natred_case_a,
    natred_case_b,
    to_metric_spec,
)
from gospaces.numerics import DEFAULT_POLICY


class TestIdealDecomposition:
    def test_su2_double_diag(self, su2_double):
        _g, _h, _space, dec = su2_double
        assert (dec.N, dec.N0, dec.N1) == (2, 0, 0)
        assert all(i.projection_kind == "bijective" for i in dec.ideals)
        # diagonal projections are already isometric up to the factor-count
        for ideal in dec.ideals:
            assert ideal.norm_scale == pytest.approx(1.0, abs=1e-9)

    def test_simple_g_proper_h(self):
        chain = B.build_chain("row1")
        dec = decompose_ideals(chain.g, chain.h, seed=0)
        assert (dec.N, dec.N0, dec.N1) == (1, 0, 1)
        assert dec.ideals[0].projection_kind == "injective"

    def test_mixed_sum(self):
        su2, su3 = B.build_su(2), B.build_su(3)
        g = B.direct_sum(su2, su3)
        h = B.factor_subalgebra(g, [su2, su3], 0)
        dec = decompose_ideals(g, h, seed=0)
        assert (dec.N, dec.N0, dec.N1) == (2, 1, 1)
        assert dec.ideals[0].projection_kind == "trivial"
        assert dec.ideals[0].dim == 8              # su(3), commutes with h
        assert dec.ideals[1].projection_kind == "bijective"

    def test_non_semisimple_rejected(self):
        u2 = B.build_u(2)
        h = B.factor_subalgebra(u2, [u2], 0)
        with pytest.raises(ValueError, match="positive definite"):
            decompose_ideals(u2, h, seed=0)


class TestCaseA:
    def test_ledger_obata_drop_one(self, su2_triple):
        _g, _h, space, dec = su2_triple
        metric = natred_case_a(dec, 2, [1.0, 2.0, 0.0])
        assert metric.dim_p == 6
        assert check_kostant(metric)
        assert check_natred_identity(metric) <= DEFAULT_POLICY.feas_tol
        spec = to_metric_spec(metric, space)
        assert linear_graph_fit(space, spec).accepted

    def test_single_simple_inapplicable(self):
        chain = B.build_chain("row1")
        dec = decompose_ideals(chain.g, chain.h, seed=0)
        with pytest.raises(ValueError, match="case \\(a\\)"):
            natred_case_a(dec, 0, [1.0])

    def test_nonpositive_beta_rejected(self, su2_triple):
        *_, dec = su2_triple
        with pytest.raises(ValueError, match="positive"):
            natred_case_a(dec, 2, [1.0, -2.0, 0.0])

    def test_non_bijective_index_rejected(self):
        su2, su3 = B.build_su(2), B.build_su(3)
        g = B.direct_sum(su2, su3)
        h = B.factor_subalgebra(g, [su2, su3], 0)
        dec = decompose_ideals(g, h, seed=0)
        with pytest.raises(ValueError, match="not a bijective copy"):
            natred_case_a(dec, 0, [1.0, 1.0])      # ideal 0 projects trivially


class TestCaseB:
    def test_normal(self, su2_double):
        *_, dec = su2_double
        res = natred_case_b(dec, (1.0, 1.0))
        assert res.accepted
        assert np.all(res.gram_eigenvalues > 0)

    def test_admissible_negative(self, su2_double):
        *_, dec = su2_double
        res = natred_case_b(dec, (1.0, -2.0))
        assert res.accepted                        # sum = -1 < 0
        assert np.all(res.gram_eigenvalues > 0)

    def test_sharp_rejection(self, su2_double):
        *_, dec = su2_double
        res = natred_case_b(dec, (1.0, -0.5))      # sum = 0.5 > 0
        assert not res.accepted
        assert res.gram_eigenvalues.min() < 0

    def test_two_negatives_rejected(self, su2_triple):
        *_, dec = su2_triple
        res = natred_case_b(dec, (1.0, -2.0, -2.0))
        assert not res.accepted
        assert res.gram_eigenvalues.min() < 0

    def test_boundary_degenerate(self, su2_double):
        *_, dec = su2_double
        res = natred_case_b(dec, (1.0, -1.0))      # sum = 0: degenerate pairing
        assert not res.accepted
        assert "degenerate" in res.reason

    def test_zero_gamma_invalid(self, su2_double):
        *_, dec = su2_double
        with pytest.raises(ValueError, match="nonzero"):
            natred_case_b(dec, (1.0, 0.0))

    def test_negative_on_nonbijective_rejected(self):
        su2, su3 = B.build_su(2), B.build_su(3)
        g = B.direct_sum(su2, su3)
        h = B.factor_subalgebra(g, [su2, su3], 0)
        dec = decompose_ideals(g, h, seed=0)
        res = natred_case_b(dec, (-1.0, 1.0))      # negative on the trivial ideal
        assert not res.accepted
        assert res.gram_eigenvalues.min() < 0


class TestKostantAndIdentity:
    def test_wrong_form_detected(self, su2_double):
        *_, dec = su2_double
        res = natred_case_b(dec, (1.0, -2.0))
        metric = res.metric
        # swap in minus-Killing for the non-uniform Q: equations must fail
        tampered = NatRedMetric(
            construction="q-complement", decomp=metric.decomp,
            p_basis=metric.p_basis, gram=metric.gram,
            coefficients=metric.coefficients,
            q_matrix=dec.g.killing_gram)
        assert check_kostant(metric)
        assert not check_kostant(tampered)

    def test_identity_large_for_non_natred(self):
        # a GO but not naturally reductive metric, pulled back to p = m
        inst = catalog.row_instance("row8", (1,), seed=7)
        space = inst.space
        spec = catalog.instantiate(inst, [1.0, 2.0])
        dec = decompose_ideals(space.g, space.h, seed=0)
        candidate = NatRedMetric(
            construction="ideal-complement", decomp=dec,
            p_basis=space.m.basis, gram=spec.matrix(), coefficients=())
        assert check_natred_identity(candidate) > 100 * DEFAULT_POLICY.feas_tol

    def test_identity_zero_for_normal(self):
        inst = catalog.row_instance("row8", (1,), seed=7)
        space = inst.space
        dec = decompose_ideals(space.g, space.h, seed=0)
        candidate = NatRedMetric(
            construction="ideal-complement", decomp=dec,
            p_basis=space.m.basis, gram=np.eye(space.dim_m), coefficients=())
        assert check_natred_identity(candidate) <= DEFAULT_POLICY.feas_tol


class TestToMetricSpec:
    def test_uniform_gamma_scalar(self, su2_double):
        _g, _h, space, dec = su2_double
        res = natred_case_b(dec, (2.5, 2.5))
        spec = to_metric_spec(res.metric, space)
        assert len(spec.alphas) == 1
        assert spec.alphas[0] == pytest.approx(2.5, rel=1e-9)

    def test_harmonic_mean_oracle(self, su2_double):
        # hand-derived: on su(2)+su(2)/diag the induced eigenvalue is
        # 2 g1 g2 / (g1 + g2) (computed from the explicit projection onto
        # p = {(u, -(g1/g2) u)} along the diagonal)
        _g, _h, space, dec = su2_double
        rng = np.random.default_rng(0)
        for _ in range(10):
            g1 = rng.uniform(0.2, 3.0)
            g2 = rng.uniform(0.2, 3.0) * (1.0 if rng.uniform() < 0.5 else -1.0)
            if g2 < 0 and g1 + g2 >= -0.05:
                continue
            res = natred_case_b(dec, (g1, g2))
            assert res.accepted
            spec = to_metric_spec(res.metric, space)
            assert len(spec.alphas) == 1
            assert spec.alphas[0] == pytest.approx(2 * g1 * g2 / (g1 + g2), rel=1e-8)

    def test_two_eigenvalues_on_triple(self, su2_triple):
        _g, _h, space, dec = su2_triple
        res = natred_case_b(dec, (1.0, 1.0, 4.0))
        spec = to_metric_spec(res.metric, space)
        assert sorted(b.shape[1] for b in spec.eigenspaces) == [3, 3]
        assert len(spec.alphas) == 2
        rep = check_go(space, spec, n_samples=100, seed=0)
        assert rep.verdict == "GO-consistent"
        assert linear_graph_fit(space, spec).accepted


class TestSharpnessSweep:
    def test_agreement_on_random_draws(self, su2_double):
        *_, dec = su2_double
        rng = np.random.default_rng(42)
        seen_adm, seen_inadm = 0, 0
        for _ in range(60):
            pattern = rng.integers(0, 3)
            g1 = rng.uniform(0.1, 2.0)
            if pattern == 0:
                gammas = (g1, rng.uniform(0.1, 2.0))
            elif pattern == 1:
                gammas = (g1, -(g1 + rng.uniform(0.1, 2.0)))   # sum < 0
            else:
                gammas = (g1, -g1 * rng.uniform(0.2, 0.9))     # sum > 0
            res = natred_case_b(dec, gammas)
            if res.accepted:
                seen_adm += 1
                assert np.all(res.gram_eigenvalues > 0)
                assert check_kostant(res.metric)
                assert check_natred_identity(res.metric) <= DEFAULT_POLICY.feas_tol
            else:
                seen_inadm += 1
                assert res.gram_eigenvalues.min() <= DEFAULT_POLICY.feas_tol
        assert seen_adm >= 20 and seen_inadm >= 10
