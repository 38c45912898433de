"""Representation-independent core for real matrix Lie algebras.

A :class:`LieAlgebra` is given by a list of n x n real basis matrices.  All
invariant data (structure constants, Killing form) is derived from the basis
alone, so downstream code never depends on the defining representation.
Inner products are always taken with respect to minus the Killing form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .numerics import (
    DEFAULT_POLICY,
    TolerancePolicy,
    kernel_basis,
    solve_least_squares,
)

__all__ = [
    "ClosureError",
    "LieAlgebra",
    "Subalgebra",
    "OrthogonalComplementModule",
    "HomogeneousSpace",
    "structure_constants",
    "killing_gram",
    "orthogonal_complement",
    "homogeneous_space",
    "centralizer_in",
    "centralizer_of_subalgebra",
]


class ClosureError(ValueError):
    """A basis commutator fell outside the span of the basis."""

    def __init__(self, i: int, j: int, residual: float):
        self.pair = (i, j)
        self.residual = residual
        super().__init__(
            f"[e_{i}, e_{j}] is not in the span of the basis "
            f"(relative residual {residual:.3e})"
        )


class LieAlgebra:
    """A real matrix Lie algebra with derived structure constants.

    Parameters
    ----------
    basis : array_like, shape (d, n, n)
        Linearly independent matrices closed under the commutator.
    name : str
        Identifier used in reports.
    normalize : bool
        Rescale each basis element to unit minus-Killing norm (directions of
        zero Killing norm are rescaled to unit Frobenius norm instead).  This
        conditions all Gram matrices near the identity.
    """

    def __init__(self, basis, name: str = "", normalize: bool = True,
                 policy: TolerancePolicy = DEFAULT_POLICY):
        B = np.asarray(basis, dtype=float)
        if B.ndim != 3 or B.shape[1] != B.shape[2]:
            raise ValueError(f"basis must have shape (d, n, n), got {B.shape}")
        if not np.all(np.isfinite(B)):
            raise ValueError("basis has non-finite entries")
        self.name = name
        self.policy = policy
        self._init_from_basis(B)
        if normalize:
            norms = np.sqrt(np.abs(np.diag(self.killing_gram)))
            frob = np.sqrt(np.einsum("ijk,ijk->i", B, B))
            scale = np.where(norms > policy.feas_tol, norms, frob)
            self._init_from_basis(B / scale[:, None, None])

    def _init_from_basis(self, B: np.ndarray):
        d, n = B.shape[0], B.shape[1]
        flat = B.reshape(d, n * n).T  # (n^2, d)
        if np.linalg.matrix_rank(flat, tol=self.policy.rel_rank_tol * max(
                1.0, float(np.linalg.norm(flat, 2)))) < d:
            raise ValueError(f"basis of {self.name or 'algebra'} is linearly dependent")
        self.basis = B
        self.dim = d
        self.ambient_dim = n
        self._flat_pinv = np.linalg.pinv(flat, rcond=self.policy.rel_rank_tol)
        self.structure_constants = structure_constants(self)
        self.killing_gram = killing_gram(self)

    # -- coordinates ---------------------------------------------------

    def element(self, coords) -> np.ndarray:
        """Ambient matrix of a coordinate vector."""
        v = np.asarray(coords, dtype=float).reshape(-1)
        return np.einsum("i,ijk->jk", v, self.basis)

    def coords(self, mat, check: bool = True) -> np.ndarray:
        """Coordinates of an ambient matrix in the basis."""
        m = np.asarray(mat, dtype=float).reshape(-1)
        v = self._flat_pinv @ m
        if check:
            res = float(np.linalg.norm(self.element(v).reshape(-1) - m))
            if res > self.policy.feas_tol * max(1.0, float(np.linalg.norm(m))):
                raise ValueError(f"matrix is not in the span of {self.name or 'algebra'}")
        return v

    # -- bracket operations in coordinates ------------------------------

    def bracket(self, u, v) -> np.ndarray:
        """Coordinates of [u, v] for coordinate vectors u, v."""
        c = self.structure_constants
        return np.einsum("i,j,ijk->k", np.asarray(u, float), np.asarray(v, float), c)

    def ad(self, u) -> np.ndarray:
        """Matrix of ad(u): v -> [u, v] in basis coordinates."""
        return np.einsum("i,ijk->kj", np.asarray(u, dtype=float), self.structure_constants)

    def inner(self, u, v) -> float:
        """Minus-Killing inner product of coordinate vectors."""
        return float(np.asarray(u, float) @ self.killing_gram @ np.asarray(v, float))

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        c = self.structure_constants
        idx = np.argwhere(np.abs(c) > 0.0)
        triples = [[int(i), int(j), int(k), float(c[i, j, k])] for i, j, k in idx]
        return {
            "schema": "lie-algebra/1",
            "name": self.name,
            "dim": self.dim,
            "ambient_dim": self.ambient_dim,
            "basis": self.basis.tolist(),
            "structure_constants": triples,
            "killing_gram": self.killing_gram.tolist(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, **kwargs)

    @classmethod
    def from_json_dict(cls, doc: dict, policy: TolerancePolicy = DEFAULT_POLICY):
        return cls(np.asarray(doc["basis"], dtype=float), name=doc.get("name", ""),
                   normalize=False, policy=policy)

    def __repr__(self):
        return f"LieAlgebra({self.name or '?'}, dim={self.dim}, ambient={self.ambient_dim})"


def structure_constants(algebra: LieAlgebra) -> np.ndarray:
    """Expansion coefficients c[i, j, k] with [e_i, e_j] = sum_k c[i,j,k] e_k.

    Raises :class:`ClosureError` naming the first offending pair when a
    commutator is not representable in the basis.
    """
    B = algebra.basis
    d = algebra.dim
    c = np.zeros((d, d, d))
    for i in range(d):
        # [e_i, e_j] for all j at once
        comm = B[i] @ B - B @ B[i]  # (d, n, n)
        coeff = algebra._flat_pinv @ comm.reshape(d, -1).T  # (d, d): coeff[k, j]
        recon = np.einsum("kj,kab->jab", coeff, B)
        for j in range(d):
            res = float(np.linalg.norm(recon[j] - comm[j]))
            scale = max(1.0, float(np.linalg.norm(comm[j])))
            if res > algebra.policy.feas_tol * scale:
                raise ClosureError(i, j, res / scale)
        c[i] = coeff.T
    return c


def killing_gram(algebra: LieAlgebra) -> np.ndarray:
    """Matrix of minus the Killing form, K[i,j] = -tr(ad e_i ad e_j).

    Computed from structure constants only, never from the defining
    representation's trace form.
    """
    c = algebra.structure_constants
    # (ad e_i)[k, l] = c[i, l, k]; tr(ad_i ad_j) = sum_{k,l} c[i,l,k] c[j,k,l]
    return -np.einsum("ilk,jkl->ij", c, c)


class Subalgebra:
    """A subalgebra h of a parent algebra, with its own derived structure.

    ``inclusion`` maps subalgebra coordinates to parent coordinates and has
    full column rank; the sub-basis matrices live in the parent's ambient
    space.
    """

    def __init__(self, parent: LieAlgebra, basis, name: str = "",
                 normalize: bool = True):
        self.parent = parent
        self.algebra = LieAlgebra(basis, name=name, normalize=normalize,
                                  policy=parent.policy)
        if self.algebra.ambient_dim != parent.ambient_dim:
            raise ValueError("subalgebra ambient size differs from parent")
        self.name = name
        self.inclusion = np.column_stack(
            [parent.coords(m) for m in self.algebra.basis]
        )  # (dim parent, dim sub)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def to_json_dict(self) -> dict:
        return {
            "schema": "subalgebra/1",
            "name": self.name,
            "parent": self.parent.name,
            "inclusion": self.inclusion.tolist(),
            "algebra": self.algebra.to_json_dict(),
        }

    def __repr__(self):
        return f"Subalgebra({self.name or '?'} < {self.parent.name or '?'}, dim={self.dim})"


@dataclass
class OrthogonalComplementModule:
    """Minus-Killing orthogonal complement m of h in g, with [h, m] ⊆ m.

    ``basis`` has shape (dim g, dim m); its columns are orthonormal with
    respect to the parent's minus-Killing form.
    """

    parent: LieAlgebra
    subalgebra: Subalgebra
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def orthogonal_complement(g: LieAlgebra, h: Subalgebra,
                          policy: TolerancePolicy | None = None) -> OrthogonalComplementModule:
    """Orthogonal complement of h in g under minus-Killing, checked reductive.

    Requires the Gram matrix of g to be positive definite (compact
    semisimple); a degenerate restriction signals a builder bug.
    """
    policy = policy or g.policy
    K = g.killing_gram
    lam = np.linalg.eigvalsh((K + K.T) / 2.0)
    if lam[0] <= policy.feas_tol * max(1.0, lam[-1]):
        raise ValueError("killing_gram of g is not positive definite")
    H = h.inclusion
    M = kernel_basis(H.T @ K, policy)  # (dim g, dim m), Euclidean-orthonormal
    if M.shape[1] != g.dim - h.dim:
        raise ValueError("unexpected complement dimension; degenerate Gram restriction")
    # re-orthonormalize w.r.t. the Killing inner product
    G = M.T @ K @ M
    lam_g, V = np.linalg.eigh((G + G.T) / 2.0)
    if lam_g[0] <= policy.feas_tol * max(1.0, lam_g[-1]):
        raise ValueError("degenerate Gram restriction on the complement")
    M = M @ V @ np.diag(1.0 / np.sqrt(lam_g)) @ V.T
    # reductivity: [h, m] ⊆ m, i.e. K-orthogonal to h
    for i in range(h.dim):
        ad_z = g.ad(H[:, i])
        res = float(np.linalg.norm(H.T @ K @ (ad_z @ M)))
        if res > policy.feas_tol * max(1.0, float(np.linalg.norm(ad_z @ M))):
            raise ValueError("[h, m] is not contained in m")
    return OrthogonalComplementModule(parent=g, subalgebra=h, basis=M)


@dataclass
class HomogeneousSpace:
    """Reductive data g = h ⊕ m for a homogeneous space G/H.

    All coordinates are in the basis of g; ``m.basis`` columns are
    minus-Killing orthonormal.  ``isotropy_action`` gives the matrices of
    ad(z_i) restricted to m in m-coordinates (skew-symmetric).
    """

    g: LieAlgebra
    h: Subalgebra
    m: OrthogonalComplementModule
    name: str = ""
    _isotropy: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim_m(self) -> int:
        return self.m.dim

    def isotropy_action(self) -> np.ndarray:
        """Array (dim h, dim m, dim m) of the h-action on m in m-coordinates."""
        if self._isotropy is None:
            K, M, H = self.g.killing_gram, self.m.basis, self.h.inclusion
            R = np.empty((self.h.dim, self.m.dim, self.m.dim))
            for i in range(self.h.dim):
                R[i] = M.T @ K @ (self.g.ad(H[:, i]) @ M)
            self._isotropy = R
        return self._isotropy

    def m_to_g(self, x) -> np.ndarray:
        """g-coordinates of an m-coordinate vector."""
        return self.m.basis @ np.asarray(x, dtype=float)

    def g_to_m(self, v) -> np.ndarray:
        """m-coordinates of the m-component of a g-coordinate vector."""
        return self.m.basis.T @ self.g.killing_gram @ np.asarray(v, dtype=float)

    def h_component(self, v) -> np.ndarray:
        """h-coordinates of the h-component of a g-coordinate vector.

        Valid because g = h ⊕ m is a minus-Killing orthogonal decomposition;
        the h-block Gram is inverted once per call site (cheap, dim h small).
        """
        H, K = self.h.inclusion, self.g.killing_gram
        G = H.T @ K @ H
        return np.linalg.solve(G, H.T @ K @ np.asarray(v, dtype=float))


def homogeneous_space(g: LieAlgebra, h: Subalgebra, name: str = "") -> HomogeneousSpace:
    return HomogeneousSpace(g=g, h=h, m=orthogonal_complement(g, h), name=name)


def centralizer_in(h, X, policy: TolerancePolicy | None = None) -> np.ndarray:
    """Basis of the centralizer of X in h, as h-coordinate columns.

    ``h`` is a Subalgebra or a bare LieAlgebra.  X may be an ambient matrix
    (the map is Z -> [Z, X]) or an ambient vector (the map is Z -> Z X, the
    action on the defining representation space).
    """
    alg = h.algebra if isinstance(h, Subalgebra) else h
    policy = policy or alg.policy
    X = np.asarray(X, dtype=float)
    cols = []
    for i in range(alg.dim):
        Z = alg.basis[i]
        if X.ndim == 2:
            cols.append((Z @ X - X @ Z).reshape(-1))
        elif X.ndim == 1:
            cols.append(Z @ X)
        else:
            raise ValueError("X must be an ambient matrix or vector")
    A = np.column_stack(cols)
    return kernel_basis(A, policy)


def centralizer_of_subalgebra(g: LieAlgebra, h: Subalgebra,
                              policy: TolerancePolicy | None = None):
    """Basis of z_g(h) (g-coordinate columns) and a bracket-closure flag.

    The centralizer is the simultaneous kernel of ad over an h-basis.
    """
    policy = policy or g.policy
    H = h.inclusion
    stacked = np.vstack([g.ad(H[:, i]) for i in range(h.dim)])
    Z = kernel_basis(stacked, policy)
    closed = True
    for a in range(Z.shape[1]):
        for b in range(a + 1, Z.shape[1]):
            w = g.bracket(Z[:, a], Z[:, b])
            res = w - Z @ (Z.T @ w)  # Z has Euclidean-orthonormal columns
            if float(np.linalg.norm(res)) > policy.feas_tol * max(1.0, float(np.linalg.norm(w))):
                closed = False
    return Z, closed
