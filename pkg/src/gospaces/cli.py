"""Batch front door: build spaces, decompose, run GO checks and campaigns.

All commands emit a single JSON report (stdout or --out).  Reports embed the
tool version, seed and tolerance policy and are byte-identical for identical
(config, seed); wall-clock timing is opt-in via --timing since it would break
reproducible output.

Exit codes: 0 success / GO-consistent / accepted; 2 validation error;
3 computation error; 4 not-GO / rejected / campaign failure; 5 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .numerics import DEFAULT_POLICY, TolerancePolicy
from . import catalog
from .gocheck import check_go, linear_graph_fit
from .natred import (
    check_kostant,
    check_natred_identity,
    decompose_ideals,
    natred_case_b,
    to_metric_spec,
)
from .repmod import decompose

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_COMPUTATION = 3
EXIT_REJECTED = 4
EXIT_INCONCLUSIVE = 5


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"bad float list {text!r}") from exc


def _parse_tol(text: str) -> TolerancePolicy:
    kwargs = {}
    for part in text.split(","):
        key, _, val = part.partition("=")
        if key not in ("rel_rank_tol", "feas_tol", "margin_factor"):
            raise ValueError(f"unknown tolerance field {key!r}")
        kwargs[key] = float(val)
    return TolerancePolicy(**{**DEFAULT_POLICY.to_dict(), **kwargs})


def _load_config(ns: argparse.Namespace) -> dict:
    """Merge a JSON config file with CLI flags; flags override the file."""
    cfg = {}
    if getattr(ns, "config", None):
        with open(ns.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ValueError("config file must hold a JSON object")
    for key in ("space", "alpha", "gamma", "seed", "samples", "tol", "out", "rows"):
        val = getattr(ns, key, None)
        if val is not None:
            cfg[key] = val
    cfg.setdefault("seed", 0)
    return cfg


def _policy_from(cfg: dict) -> TolerancePolicy:
    tol = cfg.get("tol")
    if tol is None:
        return DEFAULT_POLICY
    if isinstance(tol, str):
        return _parse_tol(tol)
    return TolerancePolicy(**{**DEFAULT_POLICY.to_dict(), **tol})


def _emit(doc: dict, cfg: dict, ns: argparse.Namespace, t0: float) -> None:
    doc.setdefault("version", __version__)
    doc.setdefault("seed", cfg.get("seed"))
    doc.setdefault("policy", _policy_from(cfg).to_dict())
    if getattr(ns, "timing", False):
        doc["wall_clock_s"] = round(time.monotonic() - t0, 3)
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    out = cfg.get("out")
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _alphas_from(cfg: dict) -> list[float]:
    alpha = cfg.get("alpha")
    if alpha is None:
        raise ValueError("--alpha is required")
    if isinstance(alpha, str):
        return _parse_floats(alpha)
    return [float(a) for a in alpha]


def cmd_decompose(ns: argparse.Namespace) -> int:
    t0 = time.monotonic()
    cfg = _load_config(ns)
    sid = cfg.get("space") or ""
    seed = int(cfg["seed"])
    policy = _policy_from(cfg)
    space = catalog.resolve_space(sid, seed=seed)
    dec = decompose(space, seed=seed, policy=policy)
    classes = dec.classes()
    doc = {
        "schema": "cli-decompose/1",
        "space": sid,
        "dim_m": space.dim_m,
        "submodules": [
            {"dim": s.dim, "type": s.type, "size_class": s.size_class,
             "generic_centralizer_dim": s.generic_centralizer_dim,
             "iso_class": s.iso_class}
            for s in dec.submodules
        ],
        "isotypic_components": [
            {"iso_class": c, "multiplicity": len(idx),
             "total_dim": int(sum(dec.submodules[i].dim for i in idx)),
             "type": dec.submodules[idx[0]].type,
             "size_class": dec.submodules[idx[0]].size_class}
            for c, idx in sorted(classes.items())
        ],
        "non_canonical_classes": dec.non_canonical_classes,
    }
    _emit(doc, cfg, ns, t0)
    return EXIT_OK


def cmd_check_go(ns: argparse.Namespace) -> int:
    t0 = time.monotonic()
    cfg = _load_config(ns)
    sid = cfg.get("space") or ""
    seed = int(cfg["seed"])
    samples = int(cfg.get("samples", 200))
    policy = _policy_from(cfg)
    alphas = _alphas_from(cfg)
    if not sid.startswith("table1/"):
        raise ValueError("check-go needs a table1 space id")
    row_id, params = catalog.parse_space_id(sid)
    inst = catalog.row_instance(row_id, params, seed=seed)
    spec = catalog.instantiate(inst, alphas, policy)
    report = check_go(inst.space, spec, n_samples=samples, seed=seed, policy=policy)
    doc = report.to_json_dict()
    doc["space"] = sid
    doc["alphas"] = alphas
    doc["condition"] = catalog.condition(row_id, params, alphas, policy)
    _emit(doc, cfg, ns, t0)
    if report.verdict == "GO-consistent":
        return EXIT_OK
    if report.verdict == "not-GO":
        return EXIT_REJECTED
    return EXIT_INCONCLUSIVE


def cmd_nat_red(ns: argparse.Namespace) -> int:
    t0 = time.monotonic()
    cfg = _load_config(ns)
    sid = cfg.get("space") or ""
    seed = int(cfg["seed"])
    policy = _policy_from(cfg)
    gamma = cfg.get("gamma")
    if gamma is None:
        raise ValueError("--gamma is required")
    gammas = _parse_floats(gamma) if isinstance(gamma, str) else [float(g) for g in gamma]
    space = catalog.resolve_space(sid, seed=seed)
    dec = decompose_ideals(space.g, space.h, seed=seed, policy=policy)
    result = natred_case_b(dec, gammas, policy)
    doc = result.to_json_dict()
    doc["space"] = sid
    doc["n_ideals"] = dec.N
    doc["n_trivial"] = dec.N0
    doc["n_injective"] = dec.N1 - dec.N0
    if result.accepted:
        doc["kostant_ok"] = check_kostant(result.metric, policy)
        doc["natred_identity_residual"] = check_natred_identity(result.metric)
        spec = to_metric_spec(result.metric, space, policy)
        cert = linear_graph_fit(space, spec, seed=seed, policy=policy)
        doc["metric_alphas"] = [float(a) for a in spec.alphas]
        doc["metric_eigenspace_dims"] = [int(b.shape[1]) for b in spec.eigenspaces]
        doc["linear_graph_accepted"] = cert.accepted
        doc["linear_graph_held_out"] = cert.held_out_residual
    _emit(doc, cfg, ns, t0)
    return EXIT_OK if result.accepted else EXIT_REJECTED


def cmd_campaign(ns: argparse.Namespace) -> int:
    t0 = time.monotonic()
    cfg = _load_config(ns)
    seed = int(cfg["seed"])
    samples = int(cfg.get("samples", 200))
    policy = _policy_from(cfg)
    rows_arg = cfg.get("rows")
    rows = None
    if rows_arg:
        entries = rows_arg.split(",") if isinstance(rows_arg, str) else rows_arg
        rows = []
        for entry in entries:
            sid = entry if entry.startswith("table1/") else f"table1/{entry}"
            rows.append(catalog.parse_space_id(sid))
    n_alphas = int(cfg.get("n_alphas", getattr(ns, "n_alphas", None) or 5))
    doc = catalog.run_campaign(rows=rows, seed=seed, n_alphas=n_alphas,
                               n_samples=samples, policy=policy)
    _emit(doc, cfg, ns, t0)
    return EXIT_OK if doc["all_ok"] else EXIT_REJECTED


def cmd_list_spaces(ns: argparse.Namespace) -> int:
    t0 = time.monotonic()
    cfg = _load_config(ns)
    rows = []
    for rid in catalog.ROW_IDS:
        from .builders import CHAIN_BOUNDS
        bounds = CHAIN_BOUNDS[rid]
        if "np" in bounds:
            ids = [catalog.space_id(rid, p) for p in bounds["np"]]
        elif "n" in bounds:
            ids = [catalog.space_id(rid, (n,)) for n in bounds["n"]]
        else:
            ids = [catalog.space_id(rid)]
        rows.append({"row": rid, "space_ids": ids,
                     "alpha_arity": catalog.alpha_arity(
                         rid, catalog.canonical_params(rid, None))})
    doc = {"schema": "cli-list-spaces/1", "table1": rows,
           "diagonal": catalog.DIAG_SPACE_IDS}
    _emit(doc, cfg, ns, t0)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gospaces",
        description="Verify geodesic-orbit and naturally reductive metrics "
                    "on compact homogeneous spaces with simple isotropy.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alpha=False, gamma=False, rows=False, samples=False):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--space", help="space id, e.g. table1/row6?n=3")
        p.add_argument("--seed", type=int, help="random seed (default 0)")
        p.add_argument("--tol", help="tolerance overrides, e.g. feas_tol=1e-9")
        p.add_argument("--out", help="write the JSON report to this file")
        p.add_argument("--timing", action="store_true",
                       help="embed wall-clock time (breaks byte-reproducibility)")
        if alpha:
            p.add_argument("--alpha", help="comma-separated metric eigenvalues")
        if gamma:
            p.add_argument("--gamma", help="comma-separated form coefficients")
        if samples:
            p.add_argument("--samples", type=int, help="GO samples per metric (>= 100)")
        if rows:
            p.add_argument("--rows", help="comma-separated row ids (default: all)")
            p.add_argument("--n-alphas", dest="n_alphas", type=int,
                           help="eigenvalue draws per row (default 5)")

    p = sub.add_parser("decompose", help="irreducible isotropy decomposition")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check-go", help="GO sampling verdict for one metric")
    common(p, alpha=True, samples=True)
    p.set_defaults(func=cmd_check_go)

    p = sub.add_parser("nat-red", help="naturally reductive certification")
    common(p, gamma=True)
    p.set_defaults(func=cmd_nat_red)

    p = sub.add_parser("campaign", help="positive/negative campaigns over catalog rows")
    common(p, rows=True, samples=True)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("list-spaces", help="list addressable spaces")
    common(p)
    p.set_defaults(func=cmd_list_spaces)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else 0
    try:
        return ns.func(ns)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except Exception as exc:  # computation failure
        sys.stderr.write(f"computation error: {exc.__class__.__name__}: {exc}\n")
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
