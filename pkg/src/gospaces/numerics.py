"""Dense real linear algebra kernel with a single, centralized tolerance policy.

Every rank, feasibility and eigenvalue decision made elsewhere in the package
routes through the :class:`TolerancePolicy` thresholds defined here.  The
underlying factorizations are delegated to numpy/LAPACK.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TolerancePolicy",
    "DEFAULT_POLICY",
    "as_matrix",
    "solve_least_squares",
    "kernel_basis",
    "psd_kernel",
    "symmetric_eigendecomposition",
    "commutant_basis",
    "subspace_intersection",
    "cluster_values",
]


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds shared by all rank/feasibility decisions.

    rel_rank_tol
        Singular values below ``rel_rank_tol * sigma_max`` count as zero.
    feas_tol
        Relative residual below which a linear system counts as solvable.
    margin_factor
        Minimum ratio between rejected and accepted residuals for a
        confident negative verdict; residuals in between are inconclusive.
    """

    rel_rank_tol: float = 1e-10
    feas_tol: float = 1e-8
    margin_factor: float = 1e4

    def __post_init__(self):
        if not (0.0 < self.rel_rank_tol < self.feas_tol < 1.0):
            raise ValueError(
                f"need 0 < rel_rank_tol < feas_tol < 1, got "
                f"{self.rel_rank_tol!r}, {self.feas_tol!r}"
            )
        if self.margin_factor < 10.0:
            raise ValueError(f"margin_factor must be >= 10, got {self.margin_factor!r}")

    @property
    def infeas_tol(self) -> float:
        """Residual above which a system counts as confidently unsolvable."""
        return self.feas_tol * self.margin_factor

    def to_dict(self) -> dict:
        return {
            "rel_rank_tol": self.rel_rank_tol,
            "feas_tol": self.feas_tol,
            "margin_factor": self.margin_factor,
        }


DEFAULT_POLICY = TolerancePolicy()

# Normal-equation solves floor the rank cut at this multiple of machine eps;
# squaring rel_rank_tol would otherwise drop below float64 noise.
_EPS_FLOOR = 64.0 * np.finfo(float).eps

# Row count above which least squares switches to the normal-equation path.
_NORMAL_EQ_ROWS = 4096


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a 2-d float array with finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be 2-d with positive dimensions, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def solve_least_squares(M, b, policy: TolerancePolicy = DEFAULT_POLICY):
    """Minimum-norm least-squares solution of ``M x = b``.

    Returns ``(x, relative_residual)`` with
    ``relative_residual = ||M x - b|| / max(||b||, 1)``.

    Large systems (rows > ~4k) are solved through the normal equations with
    an eigenvalue cut; small ones go through SVD-based lstsq.  Both paths
    apply ``policy.rel_rank_tol`` as the rank threshold.
    """
    M = as_matrix(M, "M")
    b = np.asarray(b, dtype=float).reshape(-1)
    if M.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: M is {M.shape}, b has length {b.shape[0]}")

    if M.shape[0] > _NORMAL_EQ_ROWS and M.shape[0] > 4 * M.shape[1]:
        G = M.T @ M
        lam, V = np.linalg.eigh(G)
        lam_max = lam[-1] if lam.size else 0.0
        cut = max(policy.rel_rank_tol**2, _EPS_FLOOR) * max(lam_max, 0.0)
        inv = np.where(lam > cut, 1.0 / np.where(lam > cut, lam, 1.0), 0.0)
        x = V @ (inv * (V.T @ (M.T @ b)))
    else:
        x = np.linalg.lstsq(M, b, rcond=policy.rel_rank_tol)[0]

    residual = float(np.linalg.norm(M @ x - b))
    return x, residual / max(float(np.linalg.norm(b)), 1.0)


def kernel_basis(M, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Orthonormal basis of the numerical null space of ``M``.

    Returns an array of shape ``(cols, k)`` whose columns span the kernel;
    ``k`` may be zero.
    """
    M = as_matrix(M, "M")
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    # a spectral norm at rel_rank_tol scale is cancellation noise of O(1)
    # data: the map counts as zero
    if smax <= policy.rel_rank_tol:
        rank = 0
    else:
        rank = int(np.sum(s > policy.rel_rank_tol * smax))
    return vh[rank:].T.copy()


def psd_kernel(S, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Orthonormal kernel basis of a positive semidefinite matrix.

    For Gram/normal-equation matrices the spectrum is thresholded directly at
    ``rel_rank_tol * lambda_max`` (not its square root), since the noise floor
    of an assembled PSD operator scales with lambda_max.
    """
    S = as_matrix(S, "S")
    lam, V = np.linalg.eigh((S + S.T) / 2.0)
    lam_max = lam[-1] if lam.size else 0.0
    if lam_max <= policy.rel_rank_tol:
        return np.eye(S.shape[0])
    keep = lam <= policy.rel_rank_tol * lam_max
    return V[:, keep].copy()


def symmetric_eigendecomposition(S, policy: TolerancePolicy = DEFAULT_POLICY):
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    Raises ``ValueError`` when the input is asymmetric beyond
    ``policy.feas_tol`` relative to its norm.
    """
    S = as_matrix(S, "S")
    if S.shape[0] != S.shape[1]:
        raise ValueError(f"S must be square, got {S.shape}")
    norm = float(np.linalg.norm(S))
    if float(np.linalg.norm(S - S.T)) > policy.feas_tol * max(norm, 1.0):
        raise ValueError("input matrix is not symmetric within feas_tol")
    lam, V = np.linalg.eigh((S + S.T) / 2.0)
    return lam, V


def commutant_basis(operators, policy: TolerancePolicy = DEFAULT_POLICY) -> list[np.ndarray]:
    """Basis of matrices commuting with every operator in the list.

    The operators act on R^k; the commutant is computed as the kernel of the
    PSD operator ``T -> -sum_i [R_i, [R_i, T]]`` (valid for skew R_i; for
    general R_i the normal-equation form ``sum_i ad(R_i)^T ad(R_i)`` is used).
    Returns a list of k x k matrices, orthonormal in the Frobenius sense.
    """
    ops = [as_matrix(R, "operator") for R in operators]
    if not ops:
        raise ValueError("need at least one operator")
    k = ops[0].shape[0]
    for R in ops:
        if R.shape != (k, k):
            raise ValueError("operators must be square and of equal size")
    eye = np.eye(k)
    C = np.zeros((k * k, k * k))
    for R in ops:
        # row-major vec: vec(A X B) = kron(A, B^T) vec(X)
        A = np.kron(R, eye) - np.kron(eye, R.T)  # vec([R, X])
        C += A.T @ A
    kern = psd_kernel(C, policy)
    return [kern[:, j].reshape(k, k) for j in range(kern.shape[1])]


def subspace_intersection(U, V, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Orthonormal basis of span(U) ∩ span(V) for orthonormal-column U, V.

    Uses principal angles: singular vectors of U^T V with singular value 1.
    """
    U = as_matrix(U, "U")
    V = as_matrix(V, "V")
    if U.shape[1] == 0 or V.shape[1] == 0:
        return np.zeros((U.shape[0], 0))
    W, s, _ = np.linalg.svd(U.T @ V)
    keep = s > 1.0 - policy.feas_tol
    return U @ W[:, : int(np.sum(keep))]


def cluster_values(values, rel_tol: float) -> list[np.ndarray]:
    """Group sorted-value indices into clusters separated by relative gaps.

    Two consecutive (sorted) values belong to the same cluster when their gap
    is at most ``rel_tol * max(1, value scale)``.  Returns index arrays into
    the original ``values``, ordered by ascending cluster value.
    """
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size == 0:
        return []
    order = np.argsort(v, kind="stable")
    scale = max(1.0, float(np.max(np.abs(v))))
    clusters = [[order[0]]]
    for idx in order[1:]:
        if v[idx] - v[clusters[-1][-1]] <= rel_tol * scale:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    return [np.array(c, dtype=int) for c in clusters]
