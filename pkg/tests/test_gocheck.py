import json

import numpy as np
import pytest
from scipy.linalg import expm

from gospaces import builders as B
from gospaces import catalog
from gospaces.gocheck import (
    MetricSpec,
    apply_metric,
    bracket_structure_check,
    check_go,
    go_feasible,
    linear_graph_fit,
    metric_from_grouping,
)
from gospaces.numerics import DEFAULT_POLICY
from gospaces.repmod import decompose


@pytest.fixture(scope="module")
def sp2_sp1():
    inst = catalog.row_instance("row8", (1,), seed=7)
    spec = catalog.instantiate(inst, [1.0, 2.0])
    return inst, spec


class TestMetricSpec:
    def test_apply_identity(self, sp2_sp1):
        inst, _ = sp2_sp1
        spec = catalog.instantiate(inst, [1.0, 1.0])   # merged to one eigenspace
        x = np.arange(1.0, 8.0)
        assert np.allclose(apply_metric(spec, x), x)

    def test_apply_scales_component(self, sp2_sp1):
        inst, spec = sp2_sp1
        x2 = spec.eigenspaces[1][:, 0]
        assert np.allclose(apply_metric(spec, x2), 2.0 * x2)

    def test_apply_linearity(self, sp2_sp1):
        _, spec = sp2_sp1
        x1 = spec.eigenspaces[0][:, 0]
        x2 = spec.eigenspaces[1][:, 0]
        assert np.allclose(apply_metric(spec, x1 + x2), 1.0 * x1 + 2.0 * x2)

    def test_invalid_alphas(self, sp2_sp1):
        inst, spec = sp2_sp1
        with pytest.raises(ValueError, match="positive"):
            MetricSpec(eigenspaces=spec.eigenspaces, alphas=(1.0, -1.0))
        with pytest.raises(ValueError, match="distinct"):
            MetricSpec(eigenspaces=spec.eigenspaces, alphas=(2.0, 2.0))

    def test_non_invariant_eigenspace_rejected(self, sp2_sp1):
        inst, _ = sp2_sp1
        d = inst.space.dim_m
        cut = np.eye(d)[:, :2]                   # chops the quaternionic block
        rest = np.eye(d)[:, 2:]
        spec = MetricSpec(eigenspaces=(cut, rest), alphas=(1.0, 2.0))
        with pytest.raises(ValueError, match="h-invariant"):
            spec.validate(inst.space)

    def test_groups_must_partition(self, sp2_sp1):
        inst, _ = sp2_sp1
        dec = inst.decomposition
        with pytest.raises(ValueError, match="partition"):
            metric_from_grouping(dec, [[0], [0, 1, 2, 3]], [1.0, 2.0])


class TestGoFeasible:
    def test_normal_metric_zero_witness(self, sp2_sp1):
        inst, _ = sp2_sp1
        spec = catalog.instantiate(inst, [3.0, 3.0])
        rng = np.random.default_rng(0)
        s = go_feasible(inst.space, spec, rng.standard_normal(7))
        assert s.status == "feasible"
        assert s.residual <= 1e-12               # [X, aX] = 0 up to rounding
        assert np.abs(s.z).max() <= 1e-10

    def test_go_metric_feasible(self, sp2_sp1):
        inst, spec = sp2_sp1
        rng = np.random.default_rng(1)
        for _ in range(20):
            s = go_feasible(inst.space, spec, rng.standard_normal(7))
            assert s.status == "feasible"
            assert s.residual <= DEFAULT_POLICY.feas_tol

    def test_infeasible_with_margin(self):
        inst = catalog.row_instance("row6", (3,), seed=7)
        spec = catalog.instantiate(inst, [1.0, 1.0 + 1e-6, 2.0])
        rng = np.random.default_rng(2)
        statuses = [go_feasible(inst.space, spec, rng.standard_normal(13)).status
                    for _ in range(10)]
        assert "infeasible" in statuses
        bad = [go_feasible(inst.space, spec, rng.standard_normal(13))
               for _ in range(5)]
        assert all(s.residual >= DEFAULT_POLICY.infeas_tol
                   for s in bad if s.status == "infeasible")


class TestCheckGo:
    def test_row9_all_distinct(self):
        inst = catalog.row_instance("row9", (2,), seed=7)
        spec = catalog.instantiate(inst, [1.0, 2.0, 3.0])
        rep = check_go(inst.space, spec, n_samples=100, seed=0)
        assert rep.verdict == "GO-consistent"
        assert rep.worst_feasible_residual <= DEFAULT_POLICY.feas_tol

    def test_not_go_carries_witness(self):
        inst = catalog.row_instance("row6", (3,), seed=7)
        spec = catalog.instantiate(inst, [1.0, 1.5, 2.0])
        rep = check_go(inst.space, spec, n_samples=100, seed=0)
        assert rep.verdict == "not-GO"
        assert rep.failing is not None
        assert rep.failing.residual >= DEFAULT_POLICY.infeas_tol

    def test_n_samples_floor(self, sp2_sp1):
        inst, spec = sp2_sp1
        with pytest.raises(ValueError, match=">= 100"):
            check_go(inst.space, spec, n_samples=50, seed=0)

    def test_scale_invariance(self, sp2_sp1):
        inst, spec = sp2_sp1
        r1 = check_go(inst.space, spec, n_samples=100, seed=4)
        for c in (0.5, 3.0):
            r2 = check_go(inst.space, spec.scaled(c), n_samples=100, seed=4)
            assert r2.verdict == r1.verdict
            for w1, w2 in zip(r1.witnesses, r2.witnesses):
                assert np.allclose(w1.z, w2.z, atol=1e-9)
                assert np.allclose(w1.x, w2.x)

    def test_equivariance(self, sp2_sp1):
        inst, spec = sp2_sp1
        space = inst.space
        g = space.g
        rng = np.random.default_rng(8)
        x = rng.standard_normal(space.dim_m)
        s = go_feasible(space, spec, x)
        for _ in range(3):
            W = space.h.inclusion @ (0.2 * rng.standard_normal(space.h.dim))
            U = expm(g.ad(W))                     # e^{ad W} on g-coordinates
            x2 = space.g_to_m(U @ space.m_to_g(x))
            z2 = space.h_component(U @ (space.h.inclusion @ s.z))
            # transformed pair satisfies the GO equation with equal residual
            v2 = space.m_to_g(apply_metric(spec, x2))
            lhs = g.bracket(space.m_to_g(x2) + space.h.inclusion @ z2, v2)
            b2 = g.ad(v2) @ space.m_to_g(x2)
            rel = np.linalg.norm(lhs) / max(np.linalg.norm(b2), 1.0)
            assert rel == pytest.approx(s.residual, abs=1e-10)

    def test_report_json_roundtrip(self, sp2_sp1):
        inst, spec = sp2_sp1
        rep = check_go(inst.space, spec, n_samples=100, seed=4)
        doc = json.loads(rep.to_json())
        assert doc["verdict"] == "GO-consistent"
        assert doc["n_samples"] == rep.n_samples
        assert doc["policy"]["feas_tol"] == 1e-8


class TestLinearGraphFit:
    def test_normal_accepted_with_zero_map(self, sp2_sp1):
        inst, _ = sp2_sp1
        spec = catalog.instantiate(inst, [2.0, 2.0])
        cert = linear_graph_fit(inst.space, spec)
        assert cert.accepted
        assert cert.L_norm <= 1e-10
        assert cert.system_residual <= 1e-10

    def test_go_not_naturally_reductive_refused(self, sp2_sp1):
        inst, spec = sp2_sp1
        cert = linear_graph_fit(inst.space, spec)
        assert not cert.accepted
        assert cert.held_out_residual > DEFAULT_POLICY.infeas_tol

    def test_soundness_on_heldout(self, su2_triple):
        from gospaces.natred import natred_case_b, to_metric_spec
        _g, _h, space, dec = su2_triple
        res = natred_case_b(dec, (1.0, 2.0, 4.0))
        spec = to_metric_spec(res.metric, space)
        cert = linear_graph_fit(space, spec)
        assert cert.accepted
        assert cert.held_out_residual <= 10 * DEFAULT_POLICY.feas_tol
        assert cert.L_norm > 0.01                 # genuinely nonzero graph


class TestBracketStructure:
    def test_normal_metric_vacuous(self, sp2_sp1):
        inst, _ = sp2_sp1
        spec = catalog.instantiate(inst, [1.0, 1.0])
        rep = bracket_structure_check(inst.space, spec)
        assert rep.ok
        assert rep.cross_block_residual == 0.0

    def test_go_metric_passes(self):
        inst = catalog.row_instance("row6", (3,), seed=7)
        spec = catalog.instantiate(inst, [1.0, 2.0, 1.5])
        rep = bracket_structure_check(inst.space, spec)
        assert rep.ok

    def test_misgrouped_fails_corroborating(self, sp2_sp1):
        inst, _ = sp2_sp1
        name, groups = catalog.perturbations(inst)[0]
        assert name == "trivial-split"
        spec = catalog.instantiate(inst, [1.0, 2.0, 3.0], groups=groups)
        rep = bracket_structure_check(inst.space, spec)
        assert not rep.ok
        assert rep.trivial_pair_residual > DEFAULT_POLICY.feas_tol
