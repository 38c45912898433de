"""Geodesic-orbit verdict engine and natural-reductivity detector.

For a metric endomorphism A on m, a tangent vector X satisfies the GO
equation when some Z in h solves [X + Z, A X] = 0.  Per-vector feasibility
is an exact minimum-norm least-squares problem; the sampling harness
aggregates many such checks into a verdict with margin statistics.  Natural
reductivity is decided by fitting a *linear* geodesic graph L: m -> h to the
exactly polarized quadratic identity [L X + X, A X] = 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .liealg import HomogeneousSpace, centralizer_of_subalgebra
from .numerics import (
    DEFAULT_POLICY,
    TolerancePolicy,
    kernel_basis,
    solve_least_squares,
    subspace_intersection,
)
from .repmod import IsotypicDecomposition

__all__ = [
    "MetricSpec",
    "metric_from_grouping",
    "metric_from_subspaces",
    "GOSample",
    "GOReport",
    "LinearGraphCertificate",
    "apply_metric",
    "go_feasible",
    "check_go",
    "bracket_structure_check",
    "linear_graph_fit",
]


@dataclass
class MetricSpec:
    """Positive eigenvalue per A-eigenspace of m.

    ``eigenspaces`` are orthonormal bases in m-coordinates; they must be
    h-invariant, mutually orthogonal and span m; eigenvalues must be positive
    and pairwise distinct.
    """

    eigenspaces: tuple
    alphas: tuple

    def __post_init__(self):
        if len(self.eigenspaces) != len(self.alphas):
            raise ValueError("one eigenvalue per eigenspace required")
        if any(a <= 0 for a in self.alphas):
            raise ValueError("eigenvalues must be positive")
        for i, a in enumerate(self.alphas):
            for b in self.alphas[i + 1:]:
                if abs(a - b) <= 1e-12 * max(abs(a), abs(b)):
                    raise ValueError("eigenvalues must be pairwise distinct")

    @property
    def n_eigenspaces(self) -> int:
        return len(self.eigenspaces)

    @property
    def dim_m(self) -> int:
        return self.eigenspaces[0].shape[0]

    def matrix(self) -> np.ndarray:
        A = np.zeros((self.dim_m, self.dim_m))
        for B, a in zip(self.eigenspaces, self.alphas):
            A += a * (B @ B.T)
        return A

    def is_normal(self) -> bool:
        return len(self.alphas) == 1

    def scaled(self, c: float) -> "MetricSpec":
        return MetricSpec(eigenspaces=self.eigenspaces,
                          alphas=tuple(c * a for a in self.alphas))

    def validate(self, space: HomogeneousSpace,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> None:
        d = space.dim_m
        stack = np.hstack(self.eigenspaces)
        if stack.shape != (d, d):
            raise ValueError(f"eigenspaces have total dim {stack.shape[1]}, need {d}")
        if not np.allclose(stack.T @ stack, np.eye(d), atol=1e3 * policy.feas_tol):
            raise ValueError("eigenspace bases are not orthonormal/orthogonal")
        action = space.isotropy_action()
        for k, B in enumerate(self.eigenspaces):
            P = B @ B.T
            for i in range(action.shape[0]):
                W = action[i] @ B
                res = float(np.linalg.norm(W - P @ W))
                if res > 1e3 * policy.feas_tol * max(1.0, float(np.linalg.norm(W))):
                    raise ValueError(f"eigenspace {k} is not h-invariant")


def metric_from_grouping(decomp: IsotypicDecomposition, groups, alphas) -> MetricSpec:
    """MetricSpec from a partition of decomposition submodules.

    ``groups`` is a list of index lists; they must partition the submodules.
    """
    seen = sorted(i for grp in groups for i in grp)
    if seen != list(range(len(decomp.submodules))):
        raise ValueError("groups must partition the submodules exactly")
    bases = tuple(np.hstack([decomp.submodules[i].basis for i in grp]) for grp in groups)
    return MetricSpec(eigenspaces=bases, alphas=tuple(float(a) for a in alphas))


def metric_from_subspaces(space: HomogeneousSpace, bases, alphas,
                          policy: TolerancePolicy = DEFAULT_POLICY) -> MetricSpec:
    spec = MetricSpec(eigenspaces=tuple(np.asarray(b, float) for b in bases),
                      alphas=tuple(float(a) for a in alphas))
    spec.validate(space, policy)
    return spec


def apply_metric(spec: MetricSpec, x) -> np.ndarray:
    """A X in m-coordinates: scales the eigenspace components of x."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for B, a in zip(spec.eigenspaces, spec.alphas):
        out += a * (B @ (B.T @ x))
    return out


@dataclass
class GOSample:
    """One per-vector feasibility result for the GO equation."""

    x: np.ndarray                  # m-coordinates
    z: np.ndarray                  # h-coordinates of the witness
    residual: float
    status: str                    # feasible / infeasible / inconclusive
    kind: str = "gaussian"


def go_feasible(space: HomogeneousSpace, spec: MetricSpec, x,
                policy: TolerancePolicy = DEFAULT_POLICY,
                kind: str = "gaussian") -> GOSample:
    """Solve [Z, A X] = [A X, X] for Z in h by minimum-norm least squares.

    Feasible iff the relative residual is at most feas_tol; infeasible iff it
    is at least feas_tol * margin_factor; in between the sample is reported
    inconclusive, never silently dropped.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    v = space.m_to_g(apply_metric(spec, x))        # A X in g-coordinates
    ad_v = space.g.ad(v)
    M_X = -ad_v @ space.h.inclusion                # columns [z_i, A X]
    b = ad_v @ space.m_to_g(x)                     # [A X, X]
    z, residual = solve_least_squares(M_X, b, policy)
    if residual <= policy.feas_tol:
        status = "feasible"
    elif residual >= policy.infeas_tol:
        status = "infeasible"
    else:
        status = "inconclusive"
    return GOSample(x=x, z=z, residual=residual, status=status, kind=kind)


@dataclass
class GOReport:
    """Aggregate verdict of a GO sampling campaign."""

    verdict: str                            # GO-consistent / not-GO / inconclusive
    n_samples: int
    n_feasible: int
    n_infeasible: int
    n_inconclusive: int
    worst_feasible_residual: float
    min_infeasible_residual: float | None
    margin_ratio: float | None              # min infeasible / max feasible
    seed: int
    witnesses: list = field(default_factory=list)
    failing: GOSample | None = None
    policy: TolerancePolicy = DEFAULT_POLICY

    def to_json_dict(self) -> dict:
        def sample_doc(s: GOSample):
            return {"kind": s.kind, "x": s.x.tolist(), "z": s.z.tolist(),
                    "residual": s.residual, "status": s.status}
        return {
            "schema": "go-report/1",
            "verdict": self.verdict,
            "n_samples": self.n_samples,
            "n_feasible": self.n_feasible,
            "n_infeasible": self.n_infeasible,
            "n_inconclusive": self.n_inconclusive,
            "worst_feasible_residual": self.worst_feasible_residual,
            "min_infeasible_residual": self.min_infeasible_residual,
            "margin_ratio": self.margin_ratio,
            "seed": self.seed,
            "policy": self.policy.to_dict(),
            "witnesses": [sample_doc(s) for s in self.witnesses],
            "failing": sample_doc(self.failing) if self.failing else None,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, **kwargs)


_STRUCTURED_PER_PAIR = 5


def check_go(space: HomogeneousSpace, spec: MetricSpec, n_samples: int = 200,
             seed: int = 0, policy: TolerancePolicy = DEFAULT_POLICY) -> GOReport:
    """Run go_feasible over basis vectors, Gaussian samples, and pair sums.

    The structured samples draw, for every unordered pair of distinct
    eigenspaces, sums of random vectors from the two eigenspaces; these
    exercise the cross-eigenspace bracket constraints.
    """
    if n_samples < 100:
        raise ValueError(f"n_samples must be >= 100, got {n_samples}")
    rng = np.random.default_rng(seed)
    d = space.dim_m
    samples: list[GOSample] = []
    for a in range(d):
        samples.append(go_feasible(space, spec, np.eye(d)[a], policy, kind="basis"))
    for _ in range(n_samples):
        samples.append(go_feasible(space, spec, rng.standard_normal(d), policy))
    spaces_b = spec.eigenspaces
    for i in range(len(spaces_b)):
        for j in range(i + 1, len(spaces_b)):
            for _ in range(_STRUCTURED_PER_PAIR):
                x = (spaces_b[i] @ rng.standard_normal(spaces_b[i].shape[1])
                     + spaces_b[j] @ rng.standard_normal(spaces_b[j].shape[1]))
                samples.append(go_feasible(space, spec, x, policy, kind="pair"))

    feas = [s for s in samples if s.status == "feasible"]
    infeas = [s for s in samples if s.status == "infeasible"]
    incon = [s for s in samples if s.status == "inconclusive"]
    worst_feas = max((s.residual for s in feas), default=0.0)
    min_infeas = min((s.residual for s in infeas), default=None)
    if infeas:
        verdict = "not-GO"
        failing = max(infeas, key=lambda s: s.residual)
    elif incon:
        verdict, failing = "inconclusive", None
    else:
        verdict, failing = "GO-consistent", None
    margin = None
    if min_infeas is not None and worst_feas > 0.0:
        margin = min_infeas / worst_feas
    witnesses = feas[:3]
    return GOReport(
        verdict=verdict, n_samples=len(samples), n_feasible=len(feas),
        n_infeasible=len(infeas), n_inconclusive=len(incon),
        worst_feasible_residual=worst_feas, min_infeasible_residual=min_infeas,
        margin_ratio=margin, seed=seed, witnesses=witnesses, failing=failing,
        policy=policy)


@dataclass
class BracketStructureReport:
    """Exact structural constraints satisfied by GO metrics."""

    cross_block_residual: float     # [m_i, m_j] outside m_i + m_j
    large_pair_residual: float      # brackets between large eigenspaces
    trivial_pair_residual: float    # brackets between trivial parts
    large_flags: list
    ok: bool

    def to_json_dict(self) -> dict:
        return {
            "schema": "bracket-structure/1",
            "cross_block_residual": self.cross_block_residual,
            "large_pair_residual": self.large_pair_residual,
            "trivial_pair_residual": self.trivial_pair_residual,
            "large_flags": self.large_flags,
            "ok": self.ok,
        }


def bracket_structure_check(space: HomogeneousSpace, spec: MetricSpec,
                            seed: int = 0,
                            policy: TolerancePolicy = DEFAULT_POLICY) -> BracketStructureReport:
    """Check [m_i, m_j] ⊆ m_i ⊕ m_j, commuting large eigenspaces, commuting
    trivial parts, over all basis pairs."""
    rng = np.random.default_rng(seed)
    g, M = space.g, space.m.basis
    K = g.killing_gram
    bases = spec.eigenspaces
    action = space.isotropy_action()

    # m-coordinates of all eigenspace basis brackets, by pair of eigenspaces
    cross = 0.0
    gvecs = [M @ B for B in bases]                 # g-coords of eigenspace bases
    for i in range(len(bases)):
        Pi = bases[i] @ bases[i].T
        for j in range(i + 1, len(bases)):
            Pj = bases[j] @ bases[j].T
            for a in range(gvecs[i].shape[1]):
                ad_a = g.ad(gvecs[i][:, a])
                w = M.T @ K @ (ad_a @ gvecs[j])    # m-coords of [e_a, m_j basis]
                res = w - Pi @ w - Pj @ w
                cross = max(cross, float(np.abs(res).max()))

    # large eigenspaces (generic centraliser zero) must pairwise commute
    H = space.h.inclusion
    large = []
    for B in bases:
        dims = []
        for _ in range(5):
            x = M @ (B @ rng.standard_normal(B.shape[1]))
            A = np.column_stack([g.ad(H[:, i]) @ x for i in range(space.h.dim)])
            dims.append(kernel_basis(A, policy).shape[1])
        large.append(min(dims) == 0)
    large_res = 0.0
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            if not (large[i] and large[j]):
                continue
            for a in range(gvecs[i].shape[1]):
                w = g.ad(gvecs[i][:, a]) @ gvecs[j]
                large_res = max(large_res, float(np.abs(w).max()))

    # trivial parts of distinct eigenspaces commute
    Z, _ = centralizer_of_subalgebra(g, space.h, policy)
    t_m = space.m.basis.T @ K @ Z                  # z_g(h) lies inside m
    if t_m.shape[1] > 0:
        U, s, _vt = np.linalg.svd(t_m, full_matrices=False)
        t_m = U[:, s > policy.rel_rank_tol * max(1.0, s[0])]
    trivial_parts = [subspace_intersection(B, t_m, policy) if t_m.shape[1] else
                     np.zeros((space.dim_m, 0)) for B in bases]
    triv_res = 0.0
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            Ti, Tj = trivial_parts[i], trivial_parts[j]
            for a in range(Ti.shape[1]):
                w = g.ad(M @ Ti[:, a]) @ (M @ Tj)
                if w.size:
                    triv_res = max(triv_res, float(np.abs(w).max()))

    ok = (cross <= policy.feas_tol and large_res <= policy.feas_tol
          and triv_res <= policy.feas_tol)
    return BracketStructureReport(
        cross_block_residual=cross, large_pair_residual=large_res,
        trivial_pair_residual=triv_res, large_flags=large, ok=ok)


@dataclass
class LinearGraphCertificate:
    """Outcome of the exact linear-geodesic-graph fit."""

    accepted: bool
    L: np.ndarray                  # (dim h, dim m)
    system_residual: float
    held_out_residual: float
    L_norm: float

    def to_json_dict(self) -> dict:
        return {
            "schema": "linear-graph/1",
            "accepted": self.accepted,
            "system_residual": self.system_residual,
            "held_out_residual": self.held_out_residual,
            "L_norm": self.L_norm,
            "L": self.L.tolist(),
        }


def linear_graph_fit(space: HomogeneousSpace, spec: MetricSpec,
                     n_holdout: int = 50, seed: int = 1,
                     policy: TolerancePolicy = DEFAULT_POLICY) -> LinearGraphCertificate:
    """Fit a linear geodesic graph L: m -> h to [L X + X, A X] = 0.

    The quadratic identity is polarized exactly over all basis pairs
    (a <= b); acceptance requires the least-squares residual of the polarized
    system to be at most feas_tol and the held-out residual on 50 random X to
    be at most 10 * feas_tol.  A refusal certifies (given GO-consistency)
    that the metric is not naturally reductive.
    """
    g, M, H = space.g, space.m.basis, space.h.inclusion
    d_m, d_h, d_g = space.dim_m, space.h.dim, g.dim
    Amat = spec.matrix()
    V = M @ Amat                                   # g-coords of A e_a
    U = M
    ad_V = np.array([g.ad(V[:, a]) for a in range(d_m)])
    neg_adV_H = -np.einsum("aij,jh->aih", ad_V, H)  # (d_m, d_g, d_h)

    pairs = [(a, b) for a in range(d_m) for b in range(a, d_m)]
    A_sys = np.zeros((len(pairs) * d_g, d_h * d_m))
    b_sys = np.zeros(len(pairs) * d_g)
    for row, (a, b) in enumerate(pairs):
        sl = slice(row * d_g, (row + 1) * d_g)
        # unknown L stored row-major: column of L for m-index a sits at [h*d_m + a]
        A_sys[sl, a::d_m] += neg_adV_H[b]
        A_sys[sl, b::d_m] += neg_adV_H[a]
        # [A e_b, e_a] = -[e_a, A e_b], so this is -([e_a, Ae_b] + [e_b, Ae_a])
        b_sys[sl] = ad_V[b] @ U[:, a] + ad_V[a] @ U[:, b]

    vecL, sys_res = solve_least_squares(A_sys, b_sys, policy)
    L = vecL.reshape(d_h, d_m)

    rng = np.random.default_rng(seed)
    held = 0.0
    for _ in range(n_holdout):
        x = rng.standard_normal(d_m)
        ax = space.m_to_g(apply_metric(spec, x))
        lhs = g.bracket(M @ x + H @ (L @ x), ax)
        ref = g.bracket(M @ x, ax)
        held = max(held, float(np.linalg.norm(lhs)) / max(float(np.linalg.norm(ref)), 1.0))

    accepted = sys_res <= policy.feas_tol and held <= 10.0 * policy.feas_tol
    return LinearGraphCertificate(
        accepted=accepted, L=L, system_residual=sys_res,
        held_out_residual=held, L_norm=float(np.linalg.norm(L)))
