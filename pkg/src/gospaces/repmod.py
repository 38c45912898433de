"""Decomposition of the isotropy module m into irreducible H-submodules.

The splitting is purely linear-algebraic: compute the commutant of the
h-action on a block, draw a random symmetric commutant element, split along
its eigenspaces and recurse.  Irreducibility is certified by the commutant
dimension (1, 2 or 4, with skew part 0, 1 or 3 for real/complex/quaternionic
type); no character theory is used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .liealg import HomogeneousSpace
from .numerics import (
    DEFAULT_POLICY,
    TolerancePolicy,
    cluster_values,
    kernel_basis,
    psd_kernel,
)

__all__ = [
    "IrreducibleSubmodule",
    "IsotypicDecomposition",
    "DecompositionError",
    "decompose",
    "classify_type",
    "classify_size",
    "equivariant_isomorphism",
    "commutant_of_action",
]

_MAX_SPLIT_ATTEMPTS = 25
_EIG_CLUSTER_TOL = 1e-6


class DecompositionError(RuntimeError):
    """A block failed to split or certify as irreducible."""


@dataclass
class IrreducibleSubmodule:
    """One irreducible h-submodule of m.

    ``basis`` has shape (dim m, dim); columns are orthonormal in
    m-coordinates (hence minus-Killing orthonormal in g).
    """

    basis: np.ndarray
    dim: int
    type: str                      # real / complex / quaternionic / trivial
    commutant_dim: int
    skew_commutant_dim: int
    generic_centralizer_dim: int
    size_class: str                # trivial / adjoint / tiny / large / small-other
    iso_class: int = -1


@dataclass
class IsotypicDecomposition:
    """Full decomposition of m with isotypic grouping metadata."""

    space: HomogeneousSpace
    submodules: list[IrreducibleSubmodule]
    seed: int
    non_canonical_classes: list[int] = field(default_factory=list)

    @property
    def dims(self) -> list[int]:
        return [s.dim for s in self.submodules]

    def isotypic_basis(self, iso_class: int) -> np.ndarray:
        cols = [s.basis for s in self.submodules if s.iso_class == iso_class]
        return np.hstack(cols)

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, s in enumerate(self.submodules):
            out.setdefault(s.iso_class, []).append(i)
        return out

    def to_json_dict(self) -> dict:
        return {
            "schema": "decomposition/1",
            "space": self.space.name,
            "dim_m": self.space.dim_m,
            "seed": self.seed,
            "submodules": [
                {
                    "dim": s.dim,
                    "type": s.type,
                    "size_class": s.size_class,
                    "generic_centralizer_dim": s.generic_centralizer_dim,
                    "commutant_dim": s.commutant_dim,
                    "iso_class": s.iso_class,
                    "basis": s.basis.tolist(),
                }
                for s in self.submodules
            ],
            "non_canonical_classes": self.non_canonical_classes,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, **kwargs)


def commutant_of_action(action: np.ndarray, block: np.ndarray,
                        policy: TolerancePolicy = DEFAULT_POLICY) -> list[np.ndarray]:
    """Commutant basis of the restricted action on a block.

    ``action`` is the (dim h, d, d) array of operators, ``block`` a (d, k)
    orthonormal coordinate basis of an invariant subspace.  Assembled as the
    kernel of the PSD operator T -> -sum_i [R_i, [R_i, T]] via Kronecker
    sums, which is cheap even for k ~ 35.
    """
    k = block.shape[1]
    eye = np.eye(k)
    C = np.zeros((k * k, k * k))
    for i in range(action.shape[0]):
        R = block.T @ action[i] @ block
        R2 = R @ R
        # row-major vec: vec(AXB) = kron(A, B^T) vec(X)
        C -= np.kron(R2, eye) + np.kron(eye, R2.T) - 2.0 * np.kron(R, R.T)
    kern = psd_kernel(C, policy)
    return [kern[:, j].reshape(k, k) for j in range(kern.shape[1])]


def _symmetric_part_basis(commutant: list[np.ndarray], policy: TolerancePolicy):
    syms = [(T + T.T) / 2.0 for T in commutant]
    flat = np.array([s.reshape(-1) for s in syms])
    norms = np.linalg.norm(flat, axis=1)
    keep = flat[norms > policy.feas_tol]
    if len(keep) == 0:
        return []
    _, s, vh = np.linalg.svd(keep, full_matrices=False)
    rank = int(np.sum(s > policy.rel_rank_tol * s[0]))
    k = commutant[0].shape[0]
    return [vh[j].reshape(k, k) for j in range(rank)]


def _split_block(action, block, rng, policy) -> list[np.ndarray]:
    """Recursively split an invariant block into irreducible blocks."""
    commutant = commutant_of_action(action, block, policy)
    sym = _symmetric_part_basis(commutant, policy)
    if len(sym) <= 1:
        if len(sym) == 0:
            raise DecompositionError("commutant has no symmetric part; not even scalars")
        return [block]
    for _ in range(_MAX_SPLIT_ATTEMPTS):
        coeffs = rng.standard_normal(len(sym))
        S = sum(c * T for c, T in zip(coeffs, sym))
        lam, V = np.linalg.eigh(S)
        clusters = cluster_values(lam, _EIG_CLUSTER_TOL)
        if len(clusters) < 2:
            continue
        out = []
        for idx in clusters:
            sub = block @ V[:, idx]
            out.extend(_split_block(action, sub, rng, policy))
        return out
    raise DecompositionError(
        f"block of dim {block.shape[1]} has symmetric commutant of dim {len(sym)} "
        f"but no random element split it after {_MAX_SPLIT_ATTEMPTS} attempts")


def classify_type(action: np.ndarray, block: np.ndarray,
                  policy: TolerancePolicy = DEFAULT_POLICY):
    """(type, commutant_dim, skew_dim) of an irreducible nontrivial block.

    Skew commutant dimension 0 -> real, 1 -> complex, 3 -> quaternionic;
    anything else is an irreducibility violation.
    """
    commutant = commutant_of_action(action, block, policy)
    sym = _symmetric_part_basis(commutant, policy)
    if len(sym) != 1:
        raise DecompositionError(
            f"block is not irreducible: symmetric commutant dim {len(sym)}")
    skew = len(commutant) - 1
    kinds = {0: "real", 1: "complex", 3: "quaternionic"}
    if skew not in kinds:
        raise DecompositionError(f"skew commutant dim {skew} not in (0, 1, 3)")
    return kinds[skew], len(commutant), skew


def _generic_centralizer_dim(action, block, rng, policy, samples: int = 10) -> int:
    """min over random X in the block of dim ker(z -> [z, X])."""
    dims = []
    for _ in range(samples):
        x = block @ rng.standard_normal(block.shape[1])
        A = np.column_stack([action[i] @ x for i in range(action.shape[0])])
        dims.append(kernel_basis(A, policy).shape[1])
    return int(min(dims))


def equivariant_isomorphism(action, block_a, block_b,
                            policy: TolerancePolicy = DEFAULT_POLICY):
    """Equivariant linear map between two irreducible blocks, or None.

    Solves T R_a_i = R_b_i T for all i; a nonzero solution between
    irreducibles is automatically invertible (checked numerically anyway).
    """
    ka, kb = block_a.shape[1], block_b.shape[1]
    if ka != kb:
        return None
    rows = []
    eye_a, eye_b = np.eye(ka), np.eye(kb)
    for i in range(action.shape[0]):
        Ra = block_a.T @ action[i] @ block_a
        Rb = block_b.T @ action[i] @ block_b
        # unknown T: (kb, ka); equation T Ra - Rb T = 0
        rows.append(np.kron(eye_b, Ra.T) - np.kron(Rb, eye_a))
    kern = kernel_basis(np.vstack(rows), policy)
    if kern.shape[1] == 0:
        return None
    T = kern[:, 0].reshape(kb, ka)
    smin = np.linalg.svd(T, compute_uv=False)[-1]
    if smin <= policy.feas_tol * np.linalg.norm(T, 2):
        return None
    return T


def _adjoint_intertwiner(space, action, block, policy):
    """Intertwiner from h (adjoint action) onto the block, or None."""
    h = space.h
    if block.shape[1] != h.dim:
        return None
    k = h.dim
    # ad matrices of h on itself in h's own coordinates
    ad_h = np.array([h.algebra.ad(np.eye(k)[i]) for i in range(k)])
    rows = []
    eye = np.eye(k)
    for i in range(k):
        R = block.T @ action[i] @ block
        rows.append(np.kron(eye, ad_h[i].T) - np.kron(R, eye))
    kern = kernel_basis(np.vstack(rows), policy)
    if kern.shape[1] == 0:
        return None
    T = kern[:, 0].reshape(k, k)
    smin = np.linalg.svd(T, compute_uv=False)[-1]
    if smin <= policy.feas_tol * np.linalg.norm(T, 2):
        return None
    return T


def classify_size(space: HomogeneousSpace, action, block, rng,
                  policy: TolerancePolicy = DEFAULT_POLICY):
    """(size_class, generic_centralizer_dim) for an irreducible block.

    trivial: the action vanishes; large: generic centralizer is zero;
    adjoint: equivariantly isomorphic to h; tiny: the remaining small,
    irreducible, nontrivial, non-adjoint case.
    """
    act_norm = max(np.linalg.norm(action[i] @ block) for i in range(action.shape[0]))
    if act_norm <= policy.feas_tol:
        return "trivial", space.h.dim
    gc = _generic_centralizer_dim(action, block, rng, policy)
    if gc == 0:
        return "large", 0
    if _adjoint_intertwiner(space, action, block, policy) is not None:
        return "adjoint", gc
    return "tiny", gc


def decompose(space: HomogeneousSpace, seed: int,
              policy: TolerancePolicy = DEFAULT_POLICY) -> IsotypicDecomposition:
    """Decompose m into irreducible submodules with full classification.

    Deterministic given the seed.  Submodules within an isotypic class of
    multiplicity >= 2 are one concrete (seed-dependent) split; the class is
    flagged non-canonical.
    """
    rng = np.random.default_rng(seed)
    action = space.isotropy_action()
    blocks = _split_block(action, np.eye(space.dim_m), rng, policy)

    subs = []
    for blk in blocks:
        size_class, gc = classify_size(space, action, blk, rng, policy)
        if size_class == "trivial":
            kind, cdim, skew = "trivial", blk.shape[1] ** 2, 0
            if blk.shape[1] != 1:
                raise DecompositionError("trivial irreducible block of dim != 1")
        else:
            kind, cdim, skew = classify_type(action, blk, policy)
        subs.append(IrreducibleSubmodule(
            basis=blk, dim=blk.shape[1], type=kind, commutant_dim=cdim,
            skew_commutant_dim=skew, generic_centralizer_dim=gc,
            size_class=size_class))

    # group into isomorphism classes
    next_class = 0
    for i, s in enumerate(subs):
        if s.iso_class >= 0:
            continue
        s.iso_class = next_class
        for t in subs[i + 1:]:
            if t.iso_class >= 0 or t.dim != s.dim or t.size_class != s.size_class:
                continue
            if s.size_class == "trivial":
                t.iso_class = next_class
                continue
            if equivariant_isomorphism(action, s.basis, t.basis, policy) is not None:
                t.iso_class = next_class
        next_class += 1

    counts: dict[int, int] = {}
    for s in subs:
        counts[s.iso_class] = counts.get(s.iso_class, 0) + 1
    non_canonical = sorted(c for c, k in counts.items() if k >= 2)

    dims_total = sum(s.dim for s in subs)
    if dims_total != space.dim_m:
        raise DecompositionError(f"submodule dims sum to {dims_total} != {space.dim_m}")
    return IsotypicDecomposition(space=space, submodules=subs, seed=seed,
                                 non_canonical_classes=non_canonical)
