"""Constructors for the concrete algebras and embedding chains H ⊂ G.

Complex and quaternionic algebras are realified once at construction
(su(n) -> 2n x 2n real, sp(n) -> 4n x 4n real); downstream code only ever
sees real matrices.  Embeddings into larger algebras are top-left block
embeddings; the octonion-derived constructions (g2, spin7, spin9) use a
fixed Fano-plane multiplication convention so golden files stay stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .liealg import (
    HomogeneousSpace,
    LieAlgebra,
    Subalgebra,
    homogeneous_space,
)
from .numerics import DEFAULT_POLICY, kernel_basis

__all__ = [
    "OctonionTable",
    "octonion_table",
    "EmbeddingChain",
    "build_so",
    "build_su",
    "build_u",
    "build_sp",
    "build_g2",
    "g2_in_so",
    "build_spin7",
    "spin7_in_so",
    "build_spin9",
    "direct_sum",
    "diagonal_subalgebra",
    "factor_subalgebra",
    "build_chain",
    "CHAIN_BOUNDS",
]

DESK_BOUNDS = {"so": 12, "su": 7, "sp": 3, "u": 7}


# ---------------------------------------------------------------------------
# classical algebras
# ---------------------------------------------------------------------------

def realify(Z) -> np.ndarray:
    """Real 2k x 2k matrix [[Re, -Im], [Im, Re]] of a complex k x k matrix."""
    Z = np.asarray(Z, dtype=complex)
    return np.block([[Z.real, -Z.imag], [Z.imag, Z.real]])


def _traceless_diag_vectors(n: int) -> np.ndarray:
    """Orthonormal basis (rows) of the traceless diagonal subspace of R^n."""
    if n < 2:
        return np.zeros((0, n))
    raw = np.zeros((n - 1, n))
    for k in range(n - 1):
        raw[k, k] = 1.0
        raw[k, k + 1] = -1.0
    q, _ = np.linalg.qr(raw.T)
    return q.T


def _su_basis_complex(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j], m[j, i] = 1.0, -1.0
            out.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = m[j, i] = 1.0j
            out.append(m)
    for v in _traceless_diag_vectors(n):
        out.append(np.diag(1.0j * v))
    return out


def _u_basis_complex(n: int) -> list[np.ndarray]:
    return _su_basis_complex(n) + [1.0j * np.eye(n) / np.sqrt(n)]


def _sp_basis_complex(n: int) -> list[np.ndarray]:
    """Basis of sp(n) inside su(2n): [[K, S], [-conj(S), conj(K)]]."""
    out = []

    def embed(K, S):
        K = np.asarray(K, dtype=complex)
        S = np.asarray(S, dtype=complex)
        return np.block([[K, S], [-S.conj(), K.conj()]])

    zero = np.zeros((n, n), dtype=complex)
    for K in _u_basis_complex(n):
        out.append(embed(K, zero))
    for a in range(n):
        for b in range(a, n):
            S = np.zeros((n, n), dtype=complex)
            S[a, b] = S[b, a] = 1.0
            out.append(embed(zero, S))
            out.append(embed(zero, 1.0j * S))
    return out


def _check_bound(kind: str, n: int, lo: int):
    hi = DESK_BOUNDS[kind]
    if not (lo <= n <= hi):
        raise ValueError(f"{kind}({n}) outside desk-scale bounds [{lo}, {hi}]")


@lru_cache(maxsize=None)
def build_so(n: int) -> LieAlgebra:
    """so(n) with basis E_ij - E_ji, i < j; dimension n(n-1)/2."""
    _check_bound("so", n, 2)
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j], m[j, i] = 1.0, -1.0
            basis.append(m)
    alg = LieAlgebra(np.array(basis), name=f"so({n})", normalize=(n > 2))
    assert alg.dim == n * (n - 1) // 2
    return alg


@lru_cache(maxsize=None)
def build_su(n: int) -> LieAlgebra:
    """Realified su(n), ambient 2n x 2n; dimension n^2 - 1."""
    _check_bound("su", n, 2)
    alg = LieAlgebra(np.array([realify(m) for m in _su_basis_complex(n)]),
                     name=f"su({n})")
    assert alg.dim == n * n - 1
    return alg


@lru_cache(maxsize=None)
def build_u(n: int) -> LieAlgebra:
    """Realified u(n); dimension n^2.  Killing form is degenerate on the centre."""
    _check_bound("u", n, 1)
    alg = LieAlgebra(np.array([realify(m) for m in _u_basis_complex(n)]),
                     name=f"u({n})")
    assert alg.dim == n * n
    return alg


@lru_cache(maxsize=None)
def build_sp(n: int) -> LieAlgebra:
    """Realified sp(n) (via the complex 2n x 2n form); dimension n(2n+1)."""
    _check_bound("sp", n, 1)
    alg = LieAlgebra(np.array([realify(m) for m in _sp_basis_complex(n)]),
                     name=f"sp({n})")
    assert alg.dim == n * (2 * n + 1)
    return alg


# ---------------------------------------------------------------------------
# octonions and the exceptional constructions
# ---------------------------------------------------------------------------

# index-doubling Fano triples: e_i e_j = e_k cyclically for each (i, j, k)
FANO_TRIPLES = ((1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7),
                (5, 6, 1), (6, 7, 2), (7, 1, 3))


@dataclass(frozen=True)
class OctonionTable:
    """Structure tensor of octonion multiplication in the basis {1, e1..e7}.

    ``table[a, b, c]`` is the e_c-coefficient of e_a * e_b.
    """

    table: np.ndarray

    def mult(self, u, v) -> np.ndarray:
        return np.einsum("a,b,abc->c", np.asarray(u, float), np.asarray(v, float),
                         self.table)

    def left_mult(self, u) -> np.ndarray:
        """8 x 8 matrix of x -> u * x."""
        return np.einsum("a,abc->cb", np.asarray(u, float), self.table)

    def right_mult(self, u) -> np.ndarray:
        """8 x 8 matrix of x -> x * u."""
        return np.einsum("b,abc->ca", np.asarray(u, float), self.table)


@lru_cache(maxsize=None)
def octonion_table() -> OctonionTable:
    T = np.zeros((8, 8, 8))
    T[0, :, :] = np.eye(8)
    for a in range(1, 8):
        T[a, 0, a] = 1.0
        T[a, a, 0] = -1.0
    for i, j, k in FANO_TRIPLES:
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            T[a, b, c] = 1.0
            T[b, a, c] = -1.0
    return OctonionTable(table=T)


def _derivation_kernel() -> np.ndarray:
    """Solutions D (7x7 on imaginary units) of D(xy) = D(x)y + x D(y)."""
    T = octonion_table().table
    rows = []
    for i in range(1, 8):
        for j in range(1, 8):
            # equation block (i, j): 8 components, 49 unknowns D[p, q], p,q in 1..7
            block = np.zeros((8, 7, 7))
            for p in range(1, 8):
                for q in range(1, 8):
                    block[p, p - 1, q - 1] += T[i, j, q]             # D(e_i e_j)
                    block[:, p - 1, q - 1] -= (q == i) * T[p, j, :]  # D(e_i) e_j
                    block[:, p - 1, q - 1] -= (q == j) * T[i, p, :]  # e_i D(e_j)
            rows.append(block.reshape(8, 49))
    A = np.vstack(rows)
    return kernel_basis(A, DEFAULT_POLICY)


@lru_cache(maxsize=None)
def build_g2() -> LieAlgebra:
    """Derivation algebra of the octonions acting on imaginary units R^7."""
    kern = _derivation_kernel()
    if kern.shape[1] != 14:
        raise RuntimeError(f"derivation system has kernel dim {kern.shape[1]}, expected 14")
    mats = np.array([kern[:, a].reshape(7, 7) for a in range(kern.shape[1])])
    alg = LieAlgebra(mats, name="g2")
    assert alg.dim == 14
    return alg


def _pad(mats, n: int) -> np.ndarray:
    mats = np.asarray(mats, dtype=float)
    k = mats.shape[1]
    out = np.zeros((mats.shape[0], n, n))
    out[:, :k, :k] = mats
    return out


def g2_in_so(n: int) -> Subalgebra:
    """g2 embedded top-left in so(n), n >= 7."""
    if n < 7:
        raise ValueError("g2 needs ambient so(n), n >= 7")
    return Subalgebra(build_so(n), _pad(build_g2().basis, n), name="g2")


@lru_cache(maxsize=None)
def build_spin7() -> LieAlgebra:
    """spin(7) in so(8): span of products of octonion left multiplications.

    The seven 8 x 8 operators L_i of left multiplication by imaginary units
    anticommute and square to -I; the 21 products L_i L_j (i < j) span a
    subalgebra isomorphic to so(7) acting irreducibly on R^8.
    """
    oc = octonion_table()
    gammas = [oc.left_mult(np.eye(8)[i]) for i in range(1, 8)]
    for a, ga in enumerate(gammas):
        for b, gb in enumerate(gammas):
            want = -2.0 * (a == b) * np.eye(8)
            if not np.allclose(ga @ gb + gb @ ga, want, atol=1e-12):
                raise RuntimeError(f"octonion gammas {a+1},{b+1} fail anticommutation")
    prods = [ga @ gb for a, ga in enumerate(gammas) for gb in gammas[a + 1:]]
    alg = LieAlgebra(np.array(prods), name="spin(7)")
    assert alg.dim == 21
    return alg


def spin7_in_so(n: int) -> Subalgebra:
    """spin(7) ⊂ so(8) embedded top-left in so(n), n >= 8."""
    if n < 8:
        raise ValueError("spin(7) needs ambient so(n), n >= 8")
    return Subalgebra(build_so(n), _pad(build_spin7().basis, n), name="spin7")


@lru_cache(maxsize=None)
def build_spin9() -> LieAlgebra:
    """spin(9) in so(16) from nine anticommuting symmetric involutions.

    Doubling construction: Delta_i = E ⊗ Gamma_i for the seven 8 x 8
    octonion gammas (E the 2 x 2 symplectic form), plus sigma_x ⊗ I and
    sigma_z ⊗ I; products Delta_a Delta_b (a < b) span spin(9).
    """
    oc = octonion_table()
    E = np.array([[0.0, 1.0], [-1.0, 0.0]])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    deltas = [np.kron(E, oc.left_mult(np.eye(8)[i])) for i in range(1, 8)]
    deltas += [np.kron(sx, np.eye(8)), np.kron(sz, np.eye(8))]
    for a, da in enumerate(deltas):
        for b, db in enumerate(deltas):
            want = 2.0 * (a == b) * np.eye(16)
            if not np.allclose(da @ db + db @ da, want, atol=1e-12):
                raise RuntimeError(f"spin9 gammas {a},{b} fail anticommutation")
    prods = [da @ db for a, da in enumerate(deltas) for db in deltas[a + 1:]]
    alg = LieAlgebra(np.array(prods), name="spin(9)")
    assert alg.dim == 36
    return alg


# ---------------------------------------------------------------------------
# sums and diagonals
# ---------------------------------------------------------------------------

def sp_in_su(n: int) -> Subalgebra:
    """sp(n) embedded in su(2n), both realified; complement has dim (n-1)(2n+1)."""
    return Subalgebra(build_su(2 * n), [realify(m) for m in _sp_basis_complex(n)],
                      name=f"sp({n})")


def direct_sum(*algebras: LieAlgebra, name: str = "") -> LieAlgebra:
    """Block-diagonal direct sum; basis is the concatenation of factor bases."""
    sizes = [a.ambient_dim for a in algebras]
    N = sum(sizes)
    basis = []
    offset = 0
    for a in algebras:
        for m in a.basis:
            big = np.zeros((N, N))
            big[offset:offset + a.ambient_dim, offset:offset + a.ambient_dim] = m
            basis.append(big)
        offset += a.ambient_dim
    nm = name or "+".join(a.name for a in algebras)
    return LieAlgebra(np.array(basis), name=nm)


def diagonal_subalgebra(g_sum: LieAlgebra, factor: LieAlgebra, copies: int) -> Subalgebra:
    """Diagonal copy of ``factor`` inside the direct sum of ``copies`` copies."""
    n = factor.ambient_dim
    if g_sum.ambient_dim != n * copies:
        raise ValueError("ambient size mismatch for diagonal embedding")
    basis = []
    for m in factor.basis:
        big = np.zeros((g_sum.ambient_dim, g_sum.ambient_dim))
        for c in range(copies):
            big[c * n:(c + 1) * n, c * n:(c + 1) * n] = m
        basis.append(big)
    return Subalgebra(g_sum, np.array(basis), name=f"diag({factor.name})")


def factor_subalgebra(g_sum: LieAlgebra, factors: list[LieAlgebra], index: int) -> Subalgebra:
    """The ``index``-th factor of a direct sum, as a subalgebra."""
    offset = sum(f.ambient_dim for f in factors[:index])
    f = factors[index]
    basis = []
    for m in f.basis:
        big = np.zeros((g_sum.ambient_dim, g_sum.ambient_dim))
        big[offset:offset + f.ambient_dim, offset:offset + f.ambient_dim] = m
        basis.append(big)
    return Subalgebra(g_sum, np.array(basis), name=f.name)


# ---------------------------------------------------------------------------
# embedding chains
# ---------------------------------------------------------------------------

@dataclass
class EmbeddingChain:
    """A nested chain h = s_0 ⊂ s_1 ⊂ ... ⊂ g over one ambient representation.

    Stages are subalgebras of the final algebra; consecutive inclusions are
    verified to be bracket homomorphisms with associating compositions.
    """

    name: str
    g: LieAlgebra
    stages: list[tuple[str, Subalgebra]]

    @property
    def h(self) -> Subalgebra:
        return self.stages[0][1]

    def stage(self, name: str) -> Subalgebra:
        for nm, sub in self.stages:
            if nm == name:
                return sub
        raise KeyError(f"no stage named {name!r} in chain {self.name}")

    def space(self) -> HomogeneousSpace:
        return homogeneous_space(self.g, self.h, name=self.name)

    def validate(self, policy=DEFAULT_POLICY):
        """Check nesting, bracket-homomorphism, and composition of inclusions."""
        for (nm_a, a), (nm_b, b) in zip(self.stages, self.stages[1:]):
            # coordinates of a's basis inside b; raises if not nested
            C = np.column_stack([b.algebra.coords(m) for m in a.algebra.basis])
            comp = b.inclusion @ C
            if not np.allclose(comp, a.inclusion, atol=1e3 * policy.feas_tol):
                raise ValueError(f"inclusions {nm_a} ⊂ {nm_b} ⊂ g do not compose")
        for nm, sub in self.stages:
            # bracket homomorphism of the inclusion into g
            for i in range(sub.dim):
                u = sub.inclusion[:, i]
                for j in range(i + 1, sub.dim):
                    lhs = self.g.bracket(u, sub.inclusion[:, j])
                    rhs = sub.inclusion @ sub.algebra.structure_constants[i, j]
                    if not np.allclose(lhs, rhs, atol=1e3 * policy.feas_tol):
                        raise ValueError(f"stage {nm}: inclusion is not a bracket homomorphism")
        return True


def _embed_complex(mats, n_small: int, n_big: int) -> list[np.ndarray]:
    """Top-left embedding of complex k x k matrices into m x m."""
    out = []
    for m in mats:
        big = np.zeros((n_big, n_big), dtype=complex)
        big[:n_small, :n_small] = m
        out.append(big)
    return out


def _sp_embed_complex(mats, n: int, n1: int) -> list[np.ndarray]:
    """Embed sp(n) (complex 2n form) into sp(n1), n1 >= n, block-wise."""
    out = []
    for m in mats:
        K = m[:n, :n]
        S = m[:n, n:]
        big = np.zeros((2 * n1, 2 * n1), dtype=complex)
        big[:n, :n] = K
        big[:n, n1:n1 + n] = S
        big[n1:n1 + n, :n] = -S.conj()
        big[n1:n1 + n, n1:n1 + n] = K.conj()
        out.append(big)
    return out


def _su_u_in_so_basis(n: int, N: int, with_center: bool):
    """Realified su(n) (or u(n)) embedded in so(N) via so(2n) top-left."""
    mats = _su_basis_complex(n) + ([1.0j * np.eye(n) / np.sqrt(n)] if with_center else [])
    return _pad([realify(m) for m in mats], N)


CHAIN_BOUNDS = {
    "row1": {},
    "row2": {},
    "row3": {},
    "row5": {"np": [(2, 1), (3, 2), (4, 3)]},
    "row6": {"n": [3, 4, 5]},
    "row7": {"n": [2]},
    "row8": {"n": [1, 2]},
    "row9": {"n": [2]},
    "row10": {},
    "row11": {},
}


def build_chain(row: str, **params) -> EmbeddingChain:
    """Embedding chain for a Table-1 catalog row, e.g. ``build_chain("row6", n=3)``.

    Parameter ranges are desk-scale only; unknown rows or out-of-range
    parameters raise ValueError.
    """
    if row not in CHAIN_BOUNDS:
        raise ValueError(f"unknown chain row {row!r}")

    if row in ("row1", "row2", "row3"):
        N = {"row1": 9, "row2": 10, "row3": 11}[row]
        g = build_so(N)
        spin7 = Subalgebra(g, _pad(build_spin7().basis, N), name="spin7")
        so8 = Subalgebra(g, _pad(build_so(8).basis, N), name="so(8)")
        return EmbeddingChain(name=f"Spin(7) < SO(8) < SO({N})", g=g,
                              stages=[("spin7", spin7), ("so8", so8)])

    if row == "row5":
        n, p = params.get("n"), params.get("p")
        if (n, p) not in CHAIN_BOUNDS["row5"]["np"]:
            raise ValueError(f"row5 parameters (n,p)=({n},{p}) out of range")
        g = build_su(n + p)
        sun = Subalgebra(g, [realify(m) for m in _embed_complex(
            _su_basis_complex(n), n, n + p)], name=f"su({n})")
        # s(u(n) x u(p)): su(n) + su(p) + the traceless i diag(p..p, -n..-n)
        mix = _embed_complex(_su_basis_complex(n), n, n + p)
        for m in _su_basis_complex(p):
            big = np.zeros((n + p, n + p), dtype=complex)
            big[n:, n:] = m
            mix.append(big)
        center = 1.0j * np.diag(np.array([p] * n + [-n] * p, dtype=float))
        mix.append(center / np.linalg.norm(center))
        sup = Subalgebra(g, [realify(m) for m in mix], name=f"s(u({n})+u({p}))")
        return EmbeddingChain(name=f"SU({n}) < S(U({n})xU({p})) < SU({n+p})", g=g,
                              stages=[(f"su{n}", sun), ("sunp", sup)])

    if row in ("row6", "row7"):
        n = params.get("n")
        if n not in CHAIN_BOUNDS[row]["n"]:
            raise ValueError(f"{row} parameter n={n} out of range")
        N = 2 * n + 1 if row == "row6" else 2 * n
        if row == "row7":
            n = 2 * n + 1          # H = SU(2k+1) inside SO(4k+2)
            N = 2 * n
        g = build_so(N)
        sun = Subalgebra(g, _su_u_in_so_basis(n, N, with_center=False), name=f"su({n})")
        un = Subalgebra(g, _su_u_in_so_basis(n, N, with_center=True), name=f"u({n})")
        stages = [(f"su{n}", sun), (f"u{n}", un)]
        if row == "row6":
            so2n = Subalgebra(g, _pad(build_so(2 * n).basis, N), name=f"so({2*n})")
            stages.append((f"so{2*n}", so2n))
        return EmbeddingChain(name=f"SU({n}) < U({n}) < SO({N})", g=g, stages=stages)

    if row == "row8":
        n = params.get("n")
        if n not in CHAIN_BOUNDS["row8"]["n"]:
            raise ValueError(f"row8 parameter n={n} out of range")
        g = build_sp(n + 1)
        spn = Subalgebra(g, [realify(m) for m in _sp_embed_complex(
            _sp_basis_complex(n), n, n + 1)], name=f"sp({n})")
        both = _sp_embed_complex(_sp_basis_complex(n), n, n + 1)
        for m in _sp_basis_complex(1):
            big = np.zeros((2 * (n + 1), 2 * (n + 1)), dtype=complex)
            big[n, n] = m[0, 0]
            big[n, 2 * n + 1] = m[0, 1]
            big[2 * n + 1, n] = m[1, 0]
            big[2 * n + 1, 2 * n + 1] = m[1, 1]
            both.append(big)
        spsp = Subalgebra(g, [realify(m) for m in both], name=f"sp({n})+sp(1)")
        return EmbeddingChain(name=f"Sp({n}) < Sp({n})xSp(1) < Sp({n+1})", g=g,
                              stages=[(f"sp{n}", spn), ("spsp", spsp)])

    if row == "row9":
        n = params.get("n")
        if n not in CHAIN_BOUNDS["row9"]["n"]:
            raise ValueError(f"row9 parameter n={n} out of range")
        g = build_su(2 * n + 1)
        spn = Subalgebra(g, [realify(m) for m in _embed_complex(
            _sp_basis_complex(n), 2 * n, 2 * n + 1)], name=f"sp({n})")
        su2n = Subalgebra(g, [realify(m) for m in _embed_complex(
            _su_basis_complex(2 * n), 2 * n, 2 * n + 1)], name=f"su({2*n})")
        return EmbeddingChain(name=f"Sp({n}) < SU({2*n}) < SU({2*n+1})", g=g,
                              stages=[(f"sp{n}", spn), (f"su{2*n}", su2n)])

    if row in ("row10", "row11"):
        N = 8 if row == "row10" else 9
        g = build_so(N)
        g2 = Subalgebra(g, _pad(build_g2().basis, N), name="g2")
        so7 = Subalgebra(g, _pad(build_so(7).basis, N), name="so(7)")
        return EmbeddingChain(name=f"G2 < SO(7) < SO({N})", g=g,
                              stages=[("g2", g2), ("so7", so7)])

    raise AssertionError("unreachable")
