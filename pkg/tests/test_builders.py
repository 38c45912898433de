import numpy as np
import pytest

from gospaces import builders as B
from gospaces.liealg import centralizer_in
from gospaces.numerics import commutant_basis


class TestClassicalDims:
    @pytest.mark.parametrize("n", [2, 5, 9, 12])
    def test_so(self, n):
        assert B.build_so(n).dim == n * (n - 1) // 2

    @pytest.mark.parametrize("n", [2, 3, 5, 7])
    def test_su(self, n):
        alg = B.build_su(n)
        assert alg.dim == n * n - 1
        assert alg.ambient_dim == 2 * n

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_sp(self, n):
        alg = B.build_sp(n)
        assert alg.dim == n * (2 * n + 1)
        assert alg.ambient_dim == 4 * n

    @pytest.mark.parametrize("n", [1, 3])
    def test_u(self, n):
        assert B.build_u(n).dim == n * n

    def test_bounds(self):
        for fn, bad in [(B.build_so, 13), (B.build_su, 8), (B.build_sp, 4),
                        (B.build_so, 1), (B.build_su, 1)]:
            with pytest.raises(ValueError, match="desk-scale"):
                fn(bad)

    def test_skewness(self):
        for alg in (B.build_so(5), B.build_su(3), B.build_sp(2)):
            for m in alg.basis:
                assert np.allclose(m, -m.T, atol=1e-12)


class TestOctonions:
    def test_units(self):
        oc = B.octonion_table()
        e = np.eye(8)
        for i in range(1, 8):
            assert np.allclose(oc.mult(e[i], e[i]), -e[0])   # e_i^2 = -1
            assert np.allclose(oc.mult(e[0], e[i]), e[i])

    def test_fano_convention(self):
        oc = B.octonion_table()
        e = np.eye(8)
        assert np.allclose(oc.mult(e[1], e[2]), e[4])        # e1 e2 = e4

    def test_alternative_laws_on_basis(self):
        oc = B.octonion_table()
        e = np.eye(8)
        for i in range(8):
            for j in range(8):
                x, y = e[i], e[j]
                xx = oc.mult(x, x)
                assert np.allclose(oc.mult(x, oc.mult(x, y)), oc.mult(xx, y),
                                   atol=1e-12)
                assert np.allclose(oc.mult(oc.mult(y, x), x), oc.mult(y, xx),
                                   atol=1e-12)

    def test_norm_multiplicative(self):
        oc = B.octonion_table()
        rng = np.random.default_rng(0)
        for _ in range(25):
            x, y = rng.standard_normal(8), rng.standard_normal(8)
            assert np.linalg.norm(oc.mult(x, y)) == pytest.approx(
                np.linalg.norm(x) * np.linalg.norm(y), rel=1e-12)

    def test_gamma_anticommutation(self):
        oc = B.octonion_table()
        gammas = [oc.left_mult(np.eye(8)[i]) for i in range(1, 8)]
        for a, ga in enumerate(gammas):
            for b, gb in enumerate(gammas):
                assert np.allclose(ga @ gb + gb @ ga, -2.0 * (a == b) * np.eye(8),
                                   atol=1e-12)


class TestExceptional:
    def test_g2_dim_and_complement(self):
        g2 = B.build_g2()
        assert g2.dim == 14
        sub = B.g2_in_so(7)
        assert sub.parent.dim - sub.dim == 7

    def test_g2_generic_centralizer_su3(self):
        rng = np.random.default_rng(1)
        dims = [centralizer_in(B.g2_in_so(7), rng.standard_normal(7)).shape[1]
                for _ in range(5)]
        assert min(dims) == 8

    def test_spin7_span_and_irreducibility(self):
        s7 = B.build_spin7()
        assert s7.dim == 21
        # R^8 irreducible under the matrix action: commutant is scalars
        assert len(commutant_basis(list(s7.basis))) == 1

    def test_spin7_complement_in_so8(self):
        sub = B.spin7_in_so(8)
        assert sub.parent.dim - sub.dim == 7

    def test_spin7_generic_centralizer_g2(self):
        rng = np.random.default_rng(2)
        dims = [centralizer_in(B.spin7_in_so(8), rng.standard_normal(8)).shape[1]
                for _ in range(5)]
        assert min(dims) == 14

    def test_spin9_dim_and_centralizer(self):
        s9 = B.build_spin9()
        assert s9.dim == 36
        rng = np.random.default_rng(3)
        dims = [centralizer_in(s9, rng.standard_normal(16)).shape[1]
                for _ in range(5)]
        assert min(dims) == 21                   # stationary spin(7)


CHAIN_CASES = [
    ("row1", {}, 36 - 28, 28 - 21),              # outer R^8, inner spin-7 complement
    ("row2", {}, 45 - 28, 7),
    ("row3", {}, 55 - 28, 7),
    ("row5", {"n": 3, "p": 2}, None, None),
    ("row6", {"n": 3}, None, None),
    ("row6", {"n": 4}, None, None),
    ("row6", {"n": 5}, None, None),
    ("row7", {"n": 2}, None, None),
    ("row8", {"n": 1}, None, None),
    ("row8", {"n": 2}, None, None),
    ("row9", {"n": 2}, None, None),
    ("row10", {}, None, None),
    ("row11", {}, None, None),
]


class TestChains:
    @pytest.mark.parametrize("row,kw,_a,_b", CHAIN_CASES)
    def test_validate(self, row, kw, _a, _b):
        chain = B.build_chain(row, **kw)
        assert chain.validate()

    def test_complement_dims(self):
        expected = {
            ("row1", ()): 15, ("row2", ()): 24, ("row3", ()): 34,
            ("row5", (3, 2)): 24 - 8, ("row6", (3,)): 21 - 8,
            ("row6", (4,)): 36 - 15, ("row6", (5,)): 55 - 24,
            ("row7", (2,)): 45 - 24, ("row8", (1,)): 10 - 3,
            ("row8", (2,)): 21 - 10, ("row9", (2,)): 24 - 10,
            ("row10", ()): 28 - 14, ("row11", ()): 36 - 14,
        }
        for (row, params), dim_m in expected.items():
            kw = ({"n": params[0], "p": params[1]} if len(params) == 2
                  else {"n": params[0]} if params else {})
            space = B.build_chain(row, **kw).space()
            assert space.dim_m == dim_m, (row, params)

    def test_unknown_row(self):
        with pytest.raises(ValueError, match="unknown chain row"):
            B.build_chain("row4")

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            B.build_chain("row6", n=6)
        with pytest.raises(ValueError, match="out of range"):
            B.build_chain("row5", n=5, p=1)

    def test_stage_lookup(self):
        chain = B.build_chain("row6", n=3)
        assert chain.stage("u3").dim == 9
        with pytest.raises(KeyError):
            chain.stage("nope")


class TestSums:
    def test_direct_sum_diagonal(self):
        su2 = B.build_su(2)
        g = B.direct_sum(su2, su2, su2)
        assert g.dim == 9 and g.ambient_dim == 12
        h = B.diagonal_subalgebra(g, su2, 3)
        assert h.dim == 3

    def test_factor_subalgebra(self):
        su2, su3 = B.build_su(2), B.build_su(3)
        g = B.direct_sum(su2, su3)
        f0 = B.factor_subalgebra(g, [su2, su3], 0)
        f1 = B.factor_subalgebra(g, [su2, su3], 1)
        assert f0.dim == 3 and f1.dim == 8

    def test_sp_in_su(self):
        sub = B.sp_in_su(3)
        assert sub.dim == 21
        assert sub.parent.dim == 35
