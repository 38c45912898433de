"""Complete parametrization of naturally reductive metrics on G/H.

Every naturally reductive metric arises either from an ideal complement
(case "ideal-complement": drop one simple ideal isomorphic to h and put an
invariant product on the rest) or from the orthogonal complement of h with
respect to an ad(g)-invariant quadratic form Q = sum_i gamma_i <.,.>_i
(case "q-complement"), where the per-ideal forms are normalized so that the
projection of h is a linear isometry onto its image.  Admissibility of the
gamma sign pattern is decided analytically and re-verified through the Gram
eigenvalues of Q restricted to the complement; the two must agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .gocheck import MetricSpec
from .liealg import HomogeneousSpace, LieAlgebra, Subalgebra
from .numerics import (
    DEFAULT_POLICY,
    TolerancePolicy,
    cluster_values,
    kernel_basis,
)
from .repmod import _split_block

__all__ = [
    "Ideal",
    "IdealDecomposition",
    "NatRedMetric",
    "NatRedResult",
    "decompose_ideals",
    "natred_case_a",
    "natred_case_b",
    "check_kostant",
    "check_natred_identity",
    "to_metric_spec",
]


@dataclass
class Ideal:
    """A simple ideal of g with the classification of the h-projection."""

    basis: np.ndarray              # (dim g, k), minus-Killing orthonormal columns
    projection_kind: str           # trivial / injective / bijective
    norm_scale: float              # c_i with c_i * K|_{ideal} matching K_h on proj(h)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass
class IdealDecomposition:
    """Simple ideals of g ordered trivial, injective-not-surjective, bijective."""

    g: LieAlgebra
    h: Subalgebra
    ideals: list[Ideal]

    @property
    def N(self) -> int:
        return len(self.ideals)

    @property
    def N0(self) -> int:
        return sum(1 for i in self.ideals if i.projection_kind == "trivial")

    @property
    def N1(self) -> int:
        return self.N0 + sum(1 for i in self.ideals if i.projection_kind == "injective")

    def bijective_indices(self) -> list[int]:
        return [k for k, i in enumerate(self.ideals) if i.projection_kind == "bijective"]

    def quadratic_form(self, coefficients) -> np.ndarray:
        """Gram matrix on g of sum_i coeff_i * <.,.>_i (normalized forms)."""
        K = self.g.killing_gram
        Q = np.zeros_like(K)
        for c, ideal in zip(coefficients, self.ideals):
            G = ideal.basis
            Q += float(c) * ideal.norm_scale * (K @ G @ G.T @ K)
        return Q


def decompose_ideals(g: LieAlgebra, h: Subalgebra,
                     seed: int = 0,
                     policy: TolerancePolicy = DEFAULT_POLICY) -> IdealDecomposition:
    """Split a compact semisimple g into simple ideals and classify h-projections.

    The ideals are found as the irreducible blocks of the adjoint action of g
    on itself (in a minus-Killing orthonormal basis); each block is verified
    to be bracket-closed and the blocks to pairwise commute.
    """
    K = g.killing_gram
    lam, V = np.linalg.eigh((K + K.T) / 2.0)
    if lam[0] <= policy.feas_tol * max(1.0, lam[-1]):
        raise ValueError("g is not compact semisimple: killing_gram not positive definite")
    W = V @ np.diag(1.0 / np.sqrt(lam)) @ V.T      # e-coords of K-orthonormal basis
    Winv = V @ np.diag(np.sqrt(lam)) @ V.T
    action = np.array([Winv @ g.ad(W[:, a]) @ W for a in range(g.dim)])

    rng = np.random.default_rng(seed)
    blocks = _split_block(action, np.eye(g.dim), rng, policy)
    bases = [W @ blk for blk in blocks]            # K-orthonormal columns in e-coords

    # verify ideal structure
    for a, Ga in enumerate(bases):
        for b, Gb in enumerate(bases):
            for c in range(Ga.shape[1]):
                w = g.ad(Ga[:, c]) @ Gb
                if a == b:
                    res = w - Ga @ (Ga.T @ K @ w)
                else:
                    res = w
                if float(np.abs(res).max()) > 1e3 * policy.feas_tol:
                    raise ValueError("ideal split failed closure/commutation check")

    H = h.inclusion
    K_h = h.algebra.killing_gram
    ideals = []
    for G in bases:
        proj = G.T @ K @ H                         # ideal-coords of projected h basis
        s = np.linalg.svd(proj, compute_uv=False)
        rank = int(np.sum(s > policy.rel_rank_tol * max(s[0] if s.size else 0.0, 1.0)))
        if rank == 0:
            kind, scale = "trivial", 1.0
        elif rank == h.dim:
            kind = "bijective" if G.shape[1] == h.dim else "injective"
            gram = proj.T @ proj                   # minus-Killing of g on proj(h)
            scale = float(np.sum(gram * K_h) / np.sum(gram * gram))
            if np.linalg.norm(scale * gram - K_h) > 1e3 * policy.feas_tol * np.linalg.norm(K_h):
                raise ValueError("projected Killing form is not proportional to K_h")
        else:
            raise ValueError(f"projection of simple h has rank {rank}, expected 0 or {h.dim}")
        ideals.append(Ideal(basis=G, projection_kind=kind, norm_scale=scale))

    order = {"trivial": 0, "injective": 1, "bijective": 2}
    ideals.sort(key=lambda i: order[i.projection_kind])
    return IdealDecomposition(g=g, h=h, ideals=ideals)


@dataclass
class NatRedMetric:
    """An Ad(H)-invariant complement p with an inner product on it."""

    construction: str              # ideal-complement / q-complement
    decomp: IdealDecomposition
    p_basis: np.ndarray            # (dim g, dim p)
    gram: np.ndarray               # inner product on the p_basis columns
    coefficients: tuple            # betas (case a, indexed like ideals) or gammas
    dropped_ideal: int | None = None
    q_matrix: np.ndarray | None = None

    @property
    def dim_p(self) -> int:
        return self.p_basis.shape[1]

    def p_projection(self) -> np.ndarray:
        """Matrix mapping g-coords to p-basis coordinates along h."""
        g, h = self.decomp.g, self.decomp.h
        T = np.hstack([self.p_basis, h.inclusion])
        return np.linalg.inv(T)[: self.dim_p]


@dataclass
class NatRedResult:
    """Acceptance/rejection of a candidate naturally reductive metric."""

    accepted: bool
    reason: str
    analytic_admissible: bool
    gram_eigenvalues: np.ndarray
    metric: NatRedMetric | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "schema": "natred-cert/1",
            "accepted": self.accepted,
            "reason": self.reason,
            "analytic_admissible": self.analytic_admissible,
            "gram_eigenvalues": np.asarray(self.gram_eigenvalues).tolist(),
        }
        if self.metric is not None:
            doc["construction"] = self.metric.construction
            doc["coefficients"] = list(self.metric.coefficients)
            doc["dim_p"] = self.metric.dim_p
        return doc

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, **kwargs)


def natred_case_a(decomp: IdealDecomposition, j: int, betas) -> NatRedMetric:
    """Ideal-complement construction: p = sum of all ideals except g_j.

    Requires the projection of h to g_j to be bijective (so g_j is a copy of
    h); the inner product is sum_{i != j} beta_i <.,.>_i with beta_i > 0.
    ``betas`` is indexed like the ideals with entry j ignored.
    """
    if j not in decomp.bijective_indices():
        raise ValueError(f"ideal {j} is not a bijective copy of h; case (a) needs one")
    if decomp.N < 2:
        raise ValueError("case (a) needs at least two simple ideals")
    betas = [float(b) for b in betas]
    if len(betas) != decomp.N:
        raise ValueError(f"need {decomp.N} beta coefficients (entry {j} ignored)")
    keep = [i for i in range(decomp.N) if i != j]
    if any(betas[i] <= 0 for i in keep):
        raise ValueError("beta coefficients must be positive")
    p = np.hstack([decomp.ideals[i].basis for i in keep])
    diag = np.concatenate([
        np.full(decomp.ideals[i].dim, betas[i] * decomp.ideals[i].norm_scale)
        for i in keep])
    return NatRedMetric(construction="ideal-complement", decomp=decomp,
                        p_basis=p, gram=np.diag(diag),
                        coefficients=tuple(betas), dropped_ideal=j)


def natred_case_b(decomp: IdealDecomposition, gammas,
                  policy: TolerancePolicy = DEFAULT_POLICY) -> NatRedResult:
    """Q-complement construction with Q = sum_i gamma_i <.,.>_i.

    Analytically admissible sign patterns: all gammas positive, or exactly
    one negative gamma at a bijective index with sum_{i > N0} gamma_i < 0.
    The Gram of Q on p is always computed; acceptance requires the analytic
    and numerical verdicts to agree.
    """
    gammas = [float(c) for c in gammas]
    if len(gammas) != decomp.N:
        raise ValueError(f"need {decomp.N} gamma coefficients")
    if any(abs(c) <= policy.feas_tol for c in gammas):
        raise ValueError("gamma coefficients must be nonzero")

    neg = [i for i, c in enumerate(gammas) if c < 0]
    tail_sum = sum(gammas[decomp.N0:])
    if not neg:
        analytic, reason = True, "all coefficients positive (normal metric)"
    elif len(neg) > 1:
        analytic, reason = False, "more than one negative coefficient"
    elif neg[0] < decomp.N1:
        analytic, reason = False, "negative coefficient on a non-bijective ideal"
    elif tail_sum >= 0:
        analytic, reason = False, "non-bijective-tail coefficient sum is not negative"
    else:
        analytic, reason = True, "one admissible negative coefficient"

    Q = decomp.quadratic_form(gammas)
    H = decomp.h.inclusion
    P = kernel_basis(H.T @ Q, policy)
    if P.shape[1] != decomp.g.dim - decomp.h.dim:
        return NatRedResult(accepted=False, analytic_admissible=analytic,
                            reason="Q-orthogonal complement has wrong dimension "
                                   "(degenerate pairing with h)",
                            gram_eigenvalues=np.array([]))
    gram = P.T @ Q @ P
    eigs = np.linalg.eigvalsh((gram + gram.T) / 2.0)
    scale = max(1.0, float(np.abs(eigs).max()))
    degenerate = bool(np.any(np.abs(eigs) <= policy.feas_tol * scale))
    numerical_pd = bool(eigs[0] > policy.feas_tol * scale)

    if analytic != numerical_pd and not degenerate:
        raise RuntimeError(
            f"analytic admissibility ({analytic}) disagrees with numerical "
            f"positive definiteness ({numerical_pd}); eigenvalues {eigs}")
    if degenerate:
        return NatRedResult(accepted=False, analytic_admissible=analytic,
                            reason="degenerate Q on the complement",
                            gram_eigenvalues=eigs)
    if not analytic:
        return NatRedResult(accepted=False, analytic_admissible=False,
                            reason=reason, gram_eigenvalues=eigs)
    metric = NatRedMetric(construction="q-complement", decomp=decomp,
                          p_basis=P, gram=gram, coefficients=tuple(gammas),
                          q_matrix=Q)
    return NatRedResult(accepted=True, analytic_admissible=True, reason=reason,
                        gram_eigenvalues=eigs, metric=metric)


def check_kostant(metric: NatRedMetric,
                  policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """Verify the defining equations of the invariant form behind the metric.

    For the q-complement construction: Q(p, h) = 0 and Q|_p equals the metric
    Gram; in both constructions the form is checked ad(q)-invariant on basis
    triples (q = g, or q = p when p is an ideal).
    """
    g = metric.decomp.g
    P, gram = metric.p_basis, metric.gram
    if metric.construction == "q-complement":
        Q = metric.q_matrix
        H = metric.decomp.h.inclusion
        r1 = float(np.abs(P.T @ Q @ H).max())
        r2 = float(np.abs(P.T @ Q @ P - gram).max())
        inv = 0.0
        for i in range(g.dim):
            ad_i = g.ad(np.eye(g.dim)[i])
            inv = max(inv, float(np.abs(ad_i.T @ Q + Q @ ad_i).max()))
        scale = max(1.0, float(np.abs(Q).max()))
        return max(r1, r2, inv) <= 1e3 * policy.feas_tol * scale
    # ideal complement: q = p, q ∩ h = 0, Q = metric itself; check invariance
    inv = 0.0
    for c in range(P.shape[1]):
        ad_c = metric.p_projection() @ np.array(
            [g.bracket(P[:, c], P[:, b]) for b in range(P.shape[1])]).T
        inv = max(inv, float(np.abs(ad_c.T @ gram + gram @ ad_c).max()))
    return inv <= 1e3 * policy.feas_tol * max(1.0, float(np.abs(gram).max()))


def check_natred_identity(metric: NatRedMetric) -> float:
    """Max polarized violation of ([X, Y]_p, X) = 0 over basis triples of p.

    Returns max |T(a,b,c) + T(c,b,a)| / max(1, max |T|) with
    T(a,b,c) = ([e_a, e_b]_p, e_c).
    """
    g = metric.decomp.g
    P, gram = metric.p_basis, metric.gram
    d_p = P.shape[1]
    proj = metric.p_projection()
    brackets = np.empty((d_p, d_p, d_p))
    for a in range(d_p):
        ad_a = g.ad(P[:, a])
        brackets[a] = (proj @ (ad_a @ P)).T        # [e_a, e_b]_p coordinates
    T = np.einsum("abp,pc->abc", brackets, gram)
    viol = np.abs(T + T.transpose(2, 1, 0)).max()
    return float(viol / max(1.0, np.abs(T).max()))


def to_metric_spec(metric: NatRedMetric, space: HomogeneousSpace,
                   policy: TolerancePolicy = DEFAULT_POLICY) -> MetricSpec:
    """Express the metric as an endomorphism on the orthogonal complement m.

    The pullback along the identification m -> g/h -> p carries the per-ideal
    rescaling implicitly; the resulting eigenvalues on m generally differ
    from the raw coefficients.
    """
    M = space.m.basis
    proj = metric.p_projection()
    pm = proj @ M                                  # p-coordinates of m basis
    A = pm.T @ metric.gram @ pm
    lam, V = np.linalg.eigh((A + A.T) / 2.0)
    if lam[0] <= policy.feas_tol * max(1.0, lam[-1]):
        raise ValueError("induced metric endomorphism is not positive definite")
    clusters = cluster_values(lam, 1e3 * policy.feas_tol)
    bases = tuple(V[:, idx] for idx in clusters)
    alphas = tuple(float(np.mean(lam[idx])) for idx in clusters)
    spec = MetricSpec(eigenspaces=bases, alphas=alphas)
    spec.validate(space, policy)
    return spec
