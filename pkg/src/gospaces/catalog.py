"""The GO-metric catalog: executable blueprints for the classified spaces.

Each catalog row knows how to build its embedding chain, assemble the
eigenspace blueprint from positional data (orthogonal complements between
chain stages, centralizer splits), evaluate its eigenvalue condition, and
run positive/negative verification campaigns against the generic GO checker.

Eigenspace blueprints are positional rather than isotypic: several rows
contain isomorphic irreducible submodules that are distinguished only by
which chain stage they lie in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import __version__
from .builders import CHAIN_BOUNDS, EmbeddingChain, build_chain
from .gocheck import (
    MetricSpec,
    bracket_structure_check,
    check_go,
    go_feasible,
    linear_graph_fit,
)
from .liealg import HomogeneousSpace, Subalgebra, centralizer_of_subalgebra
from .numerics import DEFAULT_POLICY, TolerancePolicy
from .repmod import IsotypicDecomposition, decompose

__all__ = [
    "ReducedCoefficients",
    "RowInstance",
    "ROW_IDS",
    "row_instance",
    "condition",
    "go_condition",
    "alpha_arity",
    "sample_satisfying_alphas",
    "sample_violating_alphas",
    "perturbations",
    "instantiate",
    "verify_row",
    "run_campaign",
    "reduced_condition_crosscheck",
    "parse_space_id",
    "canonical_params",
]

ROW_IDS = ["row1", "row2", "row3", "row5", "row6", "row7", "row8", "row9",
           "row10", "row11"]

# smallest in-range parameters, used when a space id carries none
_DEFAULT_PARAMS = {
    "row1": (), "row2": (), "row3": (),
    "row5": (3, 2), "row6": (3,), "row7": (2,), "row8": (1,), "row9": (2,),
    "row10": (), "row11": (),
}


def _rel_equal(a: float, b: float, policy: TolerancePolicy) -> bool:
    return abs(a - b) <= policy.feas_tol * max(abs(a), abs(b))


@dataclass(frozen=True)
class ReducedCoefficients:
    """Dimensionless eigenvalue ratios used by the odd-case closed form."""

    rho: float      # 1 - a2/a1
    sigma: float    # 1 - a3/a2
    tau: float      # 1 - a3/a1

    @classmethod
    def from_alphas(cls, a1: float, a2: float, a3: float) -> "ReducedCoefficients":
        return cls(rho=1.0 - a2 / a1, sigma=1.0 - a3 / a2, tau=1.0 - a3 / a1)

    def consistency_residual(self) -> float:
        """(1 - tau) = (1 - sigma)(1 - rho) holds by construction."""
        return abs((1.0 - self.tau) - (1.0 - self.sigma) * (1.0 - self.rho))

    def odd_case_condition(self, n: int, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
        """(n-1) sigma + tau = 0, equivalent to n/a3 = (n-1)/a2 + 1/a1."""
        lhs = (n - 1) * self.sigma + self.tau
        return abs(lhs) <= policy.feas_tol * max(1.0, abs((n - 1) * self.sigma), abs(self.tau))


# ---------------------------------------------------------------------------
# blueprint helpers (all bases are minus-Killing orthonormal, in m-coords)
# ---------------------------------------------------------------------------

def _orthonormalize_m(cols: np.ndarray, policy: TolerancePolicy) -> np.ndarray:
    if cols.shape[1] == 0:
        return cols
    U, s, _ = np.linalg.svd(cols, full_matrices=False)
    keep = s > policy.rel_rank_tol * max(1.0, s[0])
    return U[:, keep]


def _stage_complement_in_m(space: HomogeneousSpace, stage: Subalgebra,
                           policy: TolerancePolicy) -> np.ndarray:
    """m-coordinates of (stage span) ∩ m = stage ⊖ h, for stages containing h."""
    g = space.g
    K = g.killing_gram
    S = stage.inclusion                       # (dim g, dim stage) g-coords
    H = space.h.inclusion
    Ho = _orthonormalize_k(H, K, policy)
    W = S - Ho @ (Ho.T @ K @ S)               # project h out of the stage
    Wm = space.m.basis.T @ K @ W              # m-coordinates (exactly in m)
    return _orthonormalize_m(Wm, policy)


def _orthonormalize_k(cols: np.ndarray, K: np.ndarray, policy: TolerancePolicy) -> np.ndarray:
    G = cols.T @ K @ cols
    lam, V = np.linalg.eigh((G + G.T) / 2.0)
    keep = lam > policy.rel_rank_tol * max(1.0, lam[-1])
    return cols @ V[:, keep] @ np.diag(1.0 / np.sqrt(lam[keep]))


def _complement_in_m(space: HomogeneousSpace, sub: np.ndarray,
                     policy: TolerancePolicy) -> np.ndarray:
    """Orthogonal complement of a subspace (m-coords) within m."""
    d = space.dim_m
    P = np.eye(d) - sub @ sub.T
    lam, V = np.linalg.eigh((P + P.T) / 2.0)
    return V[:, lam > 0.5]


def _trivial_part(space: HomogeneousSpace, policy: TolerancePolicy) -> np.ndarray:
    """m-coords of t = z_g(h); lies inside m because h is semisimple."""
    Z, _ = centralizer_of_subalgebra(space.g, space.h, policy)
    if Z.shape[1] == 0:
        return np.zeros((space.dim_m, 0))
    t = space.m.basis.T @ space.g.killing_gram @ Z
    return _orthonormalize_m(t, policy)


def _derived_and_center(space: HomogeneousSpace, t_m: np.ndarray,
                        policy: TolerancePolicy):
    """Split the trivial part t into its derived algebra [t, t] and centre."""
    g, M = space.g, space.m.basis
    k = t_m.shape[1]
    if k == 0:
        return t_m, t_m
    brackets = []
    for a in range(k):
        for b in range(a + 1, k):
            brackets.append(g.bracket(M @ t_m[:, a], M @ t_m[:, b]))
    if brackets:
        tt = _orthonormalize_m(M.T @ g.killing_gram @ np.array(brackets).T, policy)
    else:
        tt = np.zeros((space.dim_m, 0))
    P = t_m @ t_m.T - tt @ tt.T
    lam, V = np.linalg.eigh((P + P.T) / 2.0)
    center = V[:, lam > 0.5]
    return tt, center


# ---------------------------------------------------------------------------
# row instances
# ---------------------------------------------------------------------------

@dataclass
class RowInstance:
    """A built catalog space with its blueprint eigenspace bases."""

    row_id: str
    params: tuple
    chain: EmbeddingChain
    space: HomogeneousSpace
    decomposition: IsotypicDecomposition
    groups: list            # m-coord orthonormal bases, ordered m_1, m_2, ...
    group_dims: list = field(default_factory=list)

    def __post_init__(self):
        self.group_dims = [int(b.shape[1]) for b in self.groups]

    @property
    def space_id(self) -> str:
        return space_id(self.row_id, self.params)


def canonical_params(row_id: str, params: dict | tuple | None) -> tuple:
    """Validated parameter tuple for a row (ordered (n,) or (n, p))."""
    if row_id not in ROW_IDS:
        raise ValueError(f"unknown catalog row {row_id!r}")
    bounds = CHAIN_BOUNDS[row_id]
    if params is None or params == () or params == {}:
        return _DEFAULT_PARAMS[row_id]
    if isinstance(params, dict):
        if "p" in params:
            tup = (int(params["n"]), int(params["p"]))
        elif "n" in params:
            tup = (int(params["n"]),)
        else:
            tup = ()
    else:
        tup = tuple(int(x) for x in params)
    if "np" in bounds:
        if tup not in bounds["np"]:
            raise ValueError(f"{row_id} parameters {tup} out of range {bounds['np']}")
    elif "n" in bounds:
        if len(tup) != 1 or tup[0] not in bounds["n"]:
            raise ValueError(f"{row_id} parameters {tup} out of range {bounds['n']}")
    elif tup != ():
        raise ValueError(f"{row_id} takes no parameters, got {tup}")
    return tup


def space_id(row_id: str, params: tuple = ()) -> str:
    params = canonical_params(row_id, params)
    if not params:
        return f"table1/{row_id}"
    if len(params) == 1:
        return f"table1/{row_id}?n={params[0]}"
    return f"table1/{row_id}?n={params[0]}&p={params[1]}"


def parse_space_id(sid: str):
    """Parse ids like "table1/row6?n=3" into (row_id, params tuple)."""
    if not sid.startswith("table1/"):
        raise ValueError(f"space id must start with 'table1/', got {sid!r}")
    rest = sid[len("table1/"):]
    row_id, _, query = rest.partition("?")
    kv = {}
    if query:
        for part in query.split("&"):
            key, _, val = part.partition("=")
            if key not in ("n", "p") or not val.lstrip("-").isdigit():
                raise ValueError(f"bad space id parameter {part!r}")
            kv[key] = int(val)
    return row_id, canonical_params(row_id, kv)


def _chain_kwargs(row_id: str, params: tuple) -> dict:
    if row_id == "row5":
        return {"n": params[0], "p": params[1]}
    if params:
        return {"n": params[0]}
    return {}


def _blueprint(row_id: str, params: tuple, chain: EmbeddingChain,
               space: HomogeneousSpace, decomp: IsotypicDecomposition,
               policy: TolerancePolicy) -> list:
    if row_id in ("row1", "row2", "row3"):
        inner = _stage_complement_in_m(space, chain.stage("so8"), policy)
        outer = _complement_in_m(space, inner, policy)
        return [outer, inner]

    if row_id == "row5":
        t = _trivial_part(space, policy)
        _tt, center = _derived_and_center(space, t, policy)
        m1 = _complement_in_m(space, center, policy)
        return [m1, center]

    if row_id == "row6":
        n = params[0]
        inner_full = _stage_complement_in_m(space, chain.stage(f"so{2*n}"), policy)
        outer = _complement_in_m(space, inner_full, policy)
        if n % 2 == 0:
            return [outer, inner_full]
        center = _stage_complement_in_m(space, chain.stage(f"u{n}"), policy)
        Pc = center @ center.T
        inner = _orthonormalize_m(inner_full - Pc @ inner_full, policy)
        return [outer, inner, center]

    if row_id == "row7":
        n_su = 2 * params[0] + 1
        center = _stage_complement_in_m(space, chain.stage(f"u{n_su}"), policy)
        m1 = _complement_in_m(space, center, policy)
        return [m1, center]

    if row_id == "row8":
        t = _trivial_part(space, policy)
        m1 = _complement_in_m(space, t, policy)
        return [m1, t]

    if row_id == "row9":
        n = params[0]
        inner = _stage_complement_in_m(space, chain.stage(f"su{2*n}"), policy)
        t = _trivial_part(space, policy)
        rest = _complement_in_m(space, np.hstack([inner, t]), policy)
        return [rest, inner, t]

    if row_id == "row10":
        subs = decomp.submodules
        if len(subs) != 2 or subs[0].dim != 7 or subs[1].dim != 7:
            raise ValueError("row10 decomposition does not have two 7-dim submodules")
        return [subs[0].basis, subs[1].basis]

    if row_id == "row11":
        inner = _stage_complement_in_m(space, chain.stage("so7"), policy)
        outer = _complement_in_m(space, inner, policy)
        return [outer, inner]

    raise ValueError(f"unknown catalog row {row_id!r}")


DIAG_SPACE_IDS = ["diag/su2^2", "diag/su2^3"]


@lru_cache(maxsize=None)
def diag_space(copies: int) -> HomogeneousSpace:
    """su(2)^copies with the diagonal subalgebra (the simplest natred testbed)."""
    from .builders import build_su, diagonal_subalgebra, direct_sum
    from .liealg import homogeneous_space
    su2 = build_su(2)
    g = direct_sum(*([su2] * copies), name=f"su(2)^{copies}")
    h = diagonal_subalgebra(g, su2, copies)
    return homogeneous_space(g, h, name=f"diag/su2^{copies}")


def resolve_space(sid: str, seed: int = 0) -> HomogeneousSpace:
    """Space for a CLI id: a catalog row or a diagonal test space."""
    if sid.startswith("table1/"):
        row_id, params = parse_space_id(sid)
        return row_instance(row_id, params, seed=seed).space
    if sid.startswith("diag/su2^"):
        copies = int(sid.rsplit("^", 1)[1])
        if not 2 <= copies <= 4:
            raise ValueError(f"diagonal space {sid!r} out of range (2..4 copies)")
        return diag_space(copies)
    raise ValueError(f"unknown space id {sid!r}")


@lru_cache(maxsize=None)
def row_instance(row_id: str, params: tuple = (), seed: int = 0) -> RowInstance:
    """Build, decompose and blueprint a catalog space (memoized)."""
    params = canonical_params(row_id, params)
    policy = DEFAULT_POLICY
    chain = build_chain(row_id, **_chain_kwargs(row_id, params))
    space = chain.space()
    decomp = decompose(space, seed=seed, policy=policy)
    groups = _blueprint(row_id, params, chain, space, decomp, policy)
    inst = RowInstance(row_id=row_id, params=params, chain=chain, space=space,
                       decomposition=decomp, groups=groups)
    if sum(inst.group_dims) != space.dim_m:
        raise ValueError(f"{row_id} blueprint dims {inst.group_dims} do not fill m")
    return inst


# ---------------------------------------------------------------------------
# conditions
# ---------------------------------------------------------------------------

def alpha_arity(row_id: str, params: tuple = ()) -> int:
    if row_id == "row9":
        return 3
    if row_id == "row6":
        return 3 if params[0] % 2 == 1 else 2
    return 2


def go_condition(row_id: str, params: tuple, alphas,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """Is the eigenvalue assignment geodesic-orbit for this blueprint?

    All rows admit every positive assignment except the odd case of row 6,
    which requires n/a3 = (n-1)/a2 + 1/a1.
    """
    alphas = [float(a) for a in alphas]
    if len(alphas) != alpha_arity(row_id, params):
        raise ValueError(f"{row_id}{params} takes {alpha_arity(row_id, params)} "
                         f"eigenvalues, got {len(alphas)}")
    if any(a <= 0 for a in alphas):
        raise ValueError("eigenvalues must be positive")
    if row_id == "row6" and params[0] % 2 == 1:
        n = params[0]
        a1, a2, a3 = alphas
        lhs, rhs = n / a3, (n - 1) / a2 + 1 / a1
        return abs(lhs - rhs) <= policy.feas_tol * max(abs(lhs), abs(rhs))
    return True


def condition(row_id: str, params: tuple, alphas,
              policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """The catalog condition: GO and not normal (scale-invariant).

    Rows other than the odd row-6 case read "a1 != a2"; the odd case
    additionally requires the closed-form identity; row 9 reads
    "not (a1 = a2 = a3)".
    """
    alphas = [float(a) for a in alphas]
    if not go_condition(row_id, params, alphas, policy):
        return False
    if row_id == "row9":
        return not (_rel_equal(alphas[0], alphas[1], policy)
                    and _rel_equal(alphas[1], alphas[2], policy))
    return not _rel_equal(alphas[0], alphas[1], policy)


def is_normal_alphas(alphas, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    return all(_rel_equal(alphas[0], a, policy) for a in alphas[1:])


def sample_satisfying_alphas(row_id: str, params: tuple, rng, count: int) -> list:
    """Condition-satisfying eigenvalue vectors (GO and non-normal)."""
    out = []
    arity = alpha_arity(row_id, params)
    while len(out) < count:
        a = list(np.round(rng.uniform(0.5, 3.0, size=arity), 6))
        if row_id == "row6" and params[0] % 2 == 1:
            n = params[0]
            a1, a2 = a[0], a[1]
            if abs(a1 - a2) < 0.05:
                continue
            a = [a1, a2, n / ((n - 1) / a2 + 1 / a1)]
        if len({round(x, 9) for x in a}) < len(a):
            continue
        if condition(row_id, params, a):
            out.append([float(x) for x in a])
    return out


def sample_violating_alphas(row_id: str, params: tuple, rng, count: int,
                            min_violation: float = 0.1) -> list:
    """Eigenvalue vectors violating the GO condition, or [] when impossible.

    Only the odd row-6 case has a violable eigenvalue condition; the
    violation scales a3 at least ``min_violation`` away from the closed-form
    value.
    """
    if not (row_id == "row6" and params[0] % 2 == 1):
        return []
    n = params[0]
    out = []
    while len(out) < count:
        a1, a2 = rng.uniform(0.5, 3.0, size=2)
        if abs(a1 - a2) < 0.05:
            continue
        a3_go = n / ((n - 1) / a2 + 1 / a1)
        factor = 1.0 + min_violation + rng.uniform(0.0, 0.4)
        if rng.uniform() < 0.5:
            factor = 1.0 / factor
        out.append([float(a1), float(a2), float(a3_go * factor)])
    return out


# ---------------------------------------------------------------------------
# perturbed blueprints (negative campaigns)
# ---------------------------------------------------------------------------

def perturbations(inst: RowInstance,
                  policy: TolerancePolicy = DEFAULT_POLICY) -> list:
    """Named wrong-shape eigenspace groupings that must fail the GO check.

    Rows whose only condition is a1 != a2 cannot violate GO by eigenvalue
    choice; instead the blueprint is perturbed by separating pieces that the
    catalog requires to share an eigenvalue.
    """
    space = inst.space
    out = []
    if inst.row_id in ("row2", "row3"):
        t = _trivial_part(space, policy)
        t1 = t[:, :1]
        m1_rest = _orthonormalize_m(
            inst.groups[0] - t1 @ (t1.T @ inst.groups[0]), policy)
        out.append(("trivial-separated", [m1_rest, inst.groups[1], t1]))
    if inst.row_id == "row5" and inst.params[1] >= 2:
        t = _trivial_part(space, policy)
        tt, _center = _derived_and_center(space, t, policy)
        m1_rest = _orthonormalize_m(
            inst.groups[0] - tt @ (tt.T @ inst.groups[0]), policy)
        out.append(("su(p)-separated", [m1_rest, inst.groups[1], tt]))
    if inst.row_id == "row6" and inst.params[0] % 2 == 0:
        n = inst.params[0]
        center = _stage_complement_in_m(space, inst.chain.stage(f"u{n}"), policy)
        inner = _orthonormalize_m(
            inst.groups[1] - center @ (center.T @ inst.groups[1]), policy)
        out.append(("center-separated", [inst.groups[0], inner, center]))
    if inst.row_id == "row8":
        t = inst.groups[1]
        t1, t2 = t[:, :1], t[:, 1:]
        out.append(("trivial-split", [inst.groups[0], t1, t2]))
    return out


# ---------------------------------------------------------------------------
# metric instantiation and campaigns
# ---------------------------------------------------------------------------

def instantiate(inst: RowInstance, alphas,
                policy: TolerancePolicy = DEFAULT_POLICY,
                groups=None) -> MetricSpec:
    """MetricSpec from blueprint groups, merging groups with equal eigenvalues."""
    groups = inst.groups if groups is None else groups
    alphas = [float(a) for a in alphas]
    if len(alphas) != len(groups):
        raise ValueError(f"need {len(groups)} eigenvalues, got {len(alphas)}")
    merged: list[tuple[list, float]] = []
    for B, a in zip(groups, alphas):
        for entry in merged:
            if _rel_equal(entry[1], a, policy):
                entry[0].append(B)
                break
        else:
            merged.append(([B], a))
    spec = MetricSpec(eigenspaces=tuple(np.hstack(bs) for bs, _ in merged),
                      alphas=tuple(a for _, a in merged))
    spec.validate(inst.space, policy)
    return spec


def _check_instance(inst: RowInstance, alphas, seed: int, n_samples: int,
                    policy: TolerancePolicy, groups=None, fit_graph: bool = True) -> dict:
    spec = instantiate(inst, alphas, policy, groups=groups)
    report = check_go(inst.space, spec, n_samples=n_samples, seed=seed, policy=policy)
    doc = {
        "alphas": [float(a) for a in alphas],
        "verdict": report.verdict,
        "worst_feasible_residual": report.worst_feasible_residual,
        "min_infeasible_residual": report.min_infeasible_residual,
        "n_samples": report.n_samples,
        "seed": seed,
    }
    if report.verdict == "GO-consistent":
        bs = bracket_structure_check(inst.space, spec, seed=seed, policy=policy)
        doc["bracket_structure_ok"] = bs.ok
        doc["bracket_cross_residual"] = bs.cross_block_residual
        doc["bracket_trivial_residual"] = bs.trivial_pair_residual
        if fit_graph:
            cert = linear_graph_fit(inst.space, spec, seed=seed, policy=policy)
            doc["linear_graph_accepted"] = cert.accepted
            doc["linear_graph_system_residual"] = cert.system_residual
            doc["linear_graph_held_out"] = cert.held_out_residual
            doc["linear_graph_L_norm"] = cert.L_norm
    elif report.failing is not None:
        doc["witness_residual"] = report.failing.residual
        doc["witness_x"] = report.failing.x.tolist()
    return doc


def verify_row(row_id: str, params: tuple = (), seed: int = 0,
               n_alphas: int = 5, n_samples: int = 200,
               policy: TolerancePolicy = DEFAULT_POLICY) -> dict:
    """Full positive + negative verification campaign for one catalog row.

    Positive side: condition-satisfying eigenvalues must be GO-consistent,
    pass the structural bracket checks, and be refused by the linear graph
    fit; the normal metric must be accepted with L = 0.  Negative side:
    condition-violating eigenvalues (odd row 6) and perturbed blueprints
    must produce confident not-GO verdicts with witnesses.
    """
    params = canonical_params(row_id, params)
    inst = row_instance(row_id, params, seed=seed)
    rng = np.random.default_rng(seed + 1)
    doc = {
        "schema": "campaign-row/1",
        "space": inst.space_id,
        "params": list(params),
        "seed": seed,
        "group_dims": inst.group_dims,
        "decomposition_dims": sorted(inst.decomposition.dims),
        "positive": [],
        "normal": None,
        "negative_alphas": [],
        "negative_blueprints": {},
        "agreement": True,
    }
    arity = alpha_arity(row_id, params)

    for k, alphas in enumerate(sample_satisfying_alphas(row_id, params, rng, n_alphas)):
        res = _check_instance(inst, alphas, seed=seed * 1000 + k,
                              n_samples=n_samples, policy=policy)
        res["condition"] = True
        ok = (res["verdict"] == "GO-consistent"
              and res.get("bracket_structure_ok", False)
              and not res.get("linear_graph_accepted", True))
        res["ok"] = ok
        doc["agreement"] &= ok
        doc["positive"].append(res)

    normal = _check_instance(inst, [1.0] * arity, seed=seed * 1000 + 999,
                             n_samples=n_samples, policy=policy)
    normal["ok"] = (normal["verdict"] == "GO-consistent"
                    and normal.get("linear_graph_accepted", False)
                    and normal.get("linear_graph_L_norm", 1.0) <= 1e-10)
    doc["normal"] = normal
    doc["agreement"] &= normal["ok"]

    for k, alphas in enumerate(sample_violating_alphas(row_id, params, rng, n_alphas)):
        res = _check_instance(inst, alphas, seed=seed * 1000 + 500 + k,
                              n_samples=n_samples, policy=policy)
        res["condition"] = False
        res["ok"] = res["verdict"] == "not-GO"
        doc["agreement"] &= res["ok"]
        doc["negative_alphas"].append(res)

    for name, groups in perturbations(inst, policy):
        runs = []
        for k in range(max(1, n_alphas // 2)):
            alphas = [round(float(a), 6) for a in
                      1.0 + np.arange(1, len(groups) + 1) * (0.7 + 0.1 * k)]
            res = _check_instance(inst, alphas, seed=seed * 1000 + 700 + k,
                                  n_samples=n_samples, policy=policy,
                                  groups=groups, fit_graph=False)
            res["ok"] = res["verdict"] == "not-GO"
            doc["agreement"] &= res["ok"]
            runs.append(res)
        doc["negative_blueprints"][name] = runs

    return doc


def run_campaign(rows=None, seed: int = 0, n_alphas: int = 5,
                 n_samples: int = 200,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> dict:
    """Campaign over catalog rows; deterministic for a fixed seed."""
    if rows is None:
        rows = [(rid, _DEFAULT_PARAMS[rid]) for rid in ROW_IDS]
    out = {
        "schema": "campaign/1",
        "version": __version__,
        "seed": seed,
        "policy": policy.to_dict(),
        "rows": {},
        "all_ok": True,
    }
    for rid, params in rows:
        doc = verify_row(rid, params, seed=seed, n_alphas=n_alphas,
                         n_samples=n_samples, policy=policy)
        out["rows"][space_id(rid, params)] = doc
        out["all_ok"] &= doc["agreement"]
    return out


def reduced_condition_crosscheck(n: int, alphas, seed: int = 0,
                                 n_probe: int = 40,
                                 policy: TolerancePolicy = DEFAULT_POLICY) -> dict:
    """Row-6 closed form versus the generic per-vector GO sampler.

    Evaluates the eigenvalue condition through the reduced coefficients and
    probes random tangent vectors with go_feasible; the two verdicts must
    agree (their disagreement would expose a builder or checker bug).
    """
    params = canonical_params("row6", (n,))
    inst = row_instance("row6", params, seed=seed)
    alphas = [float(a) for a in alphas]
    groups = inst.groups
    if n % 2 == 1:
        red = ReducedCoefficients.from_alphas(*alphas)
        closed_form = red.odd_case_condition(n, policy)
        reduced = {"rho": red.rho, "sigma": red.sigma, "tau": red.tau}
    else:
        reduced = None
        if len(alphas) == 2:
            closed_form = True                      # a2 = a3 merged by blueprint
        else:
            # explicit 3-eigenvalue assignment: split the centre off m_2
            closed_form = _rel_equal(alphas[1], alphas[2], policy)
            groups = perturbations(inst, policy)[0][1]
    spec = instantiate(inst, alphas, policy, groups=groups)
    rng = np.random.default_rng(seed)
    statuses = []
    for _ in range(n_probe):
        s = go_feasible(inst.space, spec, rng.standard_normal(inst.space.dim_m), policy)
        statuses.append(s.status)
    sampled_go = all(s == "feasible" for s in statuses)
    return {
        "schema": "reduced-crosscheck/1",
        "n": n,
        "alphas": alphas,
        "closed_form_go": bool(closed_form),
        "sampled_go": bool(sampled_go),
        "agree": bool(closed_form == sampled_go),
        "reduced": reduced,
    }
