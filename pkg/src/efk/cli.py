"""Command-line entry points.

    efk minimize  --config run.json [--out DIR]
    efk stability --solution field.csv --beta B [--out report.json]
    efk branch    --config branch.json [--out DIR]
    efk saddle    --R 50 --beta 1.6 [--modes 160] [--out DIR]
    efk verify    --suite all [--out scorecard.json] [--plots DIR] [--quick]

Config files are JSON mirrors of the corresponding dataclasses; see README.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np


def _build_domain(spec: dict):
    from . import domains

    kind = spec["kind"]
    if kind == "hyperrectangle":
        return domains.hyperrectangle(*spec["lengths"])
    if kind == "quadrant_square":
        return domains.quadrant_square(spec["side"])
    if kind == "ball":
        return domains.ball(spec["radius"], dim=spec.get("dim", 2))
    if kind == "annulus":
        return domains.annulus(spec["inner_radius"], spec["radius"],
                               dim=spec.get("dim", 2))
    raise SystemExit(f"unknown domain kind {kind!r}")


def _init_tuple(spec) -> tuple:
    if spec is None:
        return ("delta_phi1", None)
    if isinstance(spec, str):
        return (spec, None)
    kind = spec["kind"]
    if kind == "delta_phi1":
        return (kind, spec.get("delta"))
    if kind == "random":
        return (kind, spec.get("seed", 0), spec.get("amplitude", 0.3))
    if kind == "file":
        return (kind, spec["path"])
    return (kind,)


def _cmd_minimize(args) -> int:
    from .fieldio import save_field
    from .minimize import MinimizeConfig, minimize

    with open(args.config) as fh:
        cfg = json.load(fh)
    domain = _build_domain(cfg["domain"])
    mc = MinimizeConfig(
        beta=cfg["beta"],
        nonlinearity=cfg.get("nonlinearity", "cubic"),
        init=_init_tuple(cfg.get("init")),
        grad_tol=cfg.get("grad_tol"),
        max_iters=cfg.get("max_iters", 5000),
        multistart=cfg.get("multistart", 1),
        seeds=tuple(cfg.get("seeds", ())),
        amplitude=cfg.get("amplitude", 0.3),
        modes=tuple(cfg["modes"]) if cfg.get("modes") else None,
        n_points=cfg.get("n_points", 256),
    )
    result = minimize(mc, domain)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_field(result.field, out / "field", beta=cfg["beta"])
    report = result.report.as_dict()
    report["converged"] = result.converged
    report["iterations"] = result.iterations
    report["l2_spread"] = result.l2_spread
    with open(out / "report.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out / "trace.csv", "w") as fh:
        fh.write("iteration,energy,grad_metric\n")
        for it, f, metric in result.trace:
            fh.write(f"{it},{float(f)!r},{float(metric)!r}\n")
    print(f"converged={result.converged} iterations={result.iterations} "
          f"j_beta={report['j_beta']:.9g} sup={max(abs(report['u_min']), report['u_max']):.6g}")
    return 0 if result.converged else 2


def _cmd_stability(args) -> int:
    from .eigen import eigvec_positivity, stability_report
    from .fieldio import load_beta, load_field, save_field

    field = load_field(args.solution)
    beta = args.beta if args.beta is not None else load_beta(args.solution)
    if beta is None:
        raise SystemExit("beta not given and absent from the field sidecar")
    rep = stability_report(field, beta)
    payload = rep.as_dict()
    payload["beta"] = beta
    payload["eigvec_mu_positive"] = eigvec_positivity(rep.eigvec_mu)
    out = Path(args.out) if args.out else Path("stability.json")
    with open(out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if args.eigvecs:
        folder = out.parent
        save_field(rep.eigvec_mu, folder / "eigvec_mu", beta=beta)
        save_field(rep.eigvec_nu, folder / "eigvec_nu", beta=beta)
    print(f"mu1={rep.mu1:.6e} nu1={rep.nu1:.6e} strictly_stable={rep.is_strictly_stable}")
    return 0


def _cmd_branch(args) -> int:
    from .continuation import (ContinuationConfig, bifurcation_point,
                               continue_branch, seed_branch)
    from .fieldio import save_field

    with open(args.config) as fh:
        cfg = json.load(fh)
    domain = _build_domain(cfg["domain"])
    modes = tuple(cfg.get("modes", [48] * domain.dim))
    bb = bifurcation_point(domain)
    seed = seed_branch(domain, bb, cfg.get("epsilon", 0.05), modes,
                       cfg.get("newton_tol", 1e-9))
    cc = ContinuationConfig(
        beta_start=seed.beta,
        ds=cfg.get("ds", 0.02),
        ds_min=cfg.get("ds_min", 1e-4),
        ds_max=cfg.get("ds_max", 0.1),
        max_steps=cfg.get("max_steps", 200),
        newton_tol=cfg.get("newton_tol", 1e-9),
        direction=cfg.get("direction", "decreasing_beta"),
        beta_min=cfg.get("beta_min"),
        beta_max=cfg.get("beta_max"),
        stop_sup_below=cfg.get("stop_sup_below"),
    )
    branch = continue_branch(cc, seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "branch.csv", "w") as fh:
        fh.write("arclength,beta,sup_norm,l2_norm,nu1\n")
        for p in branch:
            fh.write(f"{float(p.arclength)!r},{float(p.beta)!r},{float(p.sup_norm)!r},{float(p.l2_norm)!r},{float(p.nu1)!r}\n")
    np.savetxt(out / "beta_supnorm.dat",
               [[p.beta, p.sup_norm] for p in branch], fmt="%.12g")
    np.savetxt(out / "arclength_beta.dat",
               [[p.arclength, p.beta] for p in branch], fmt="%.12g")
    if cfg.get("dump_fields"):
        for i, p in enumerate(branch):
            save_field(p.field, out / f"point_{i:04d}", beta=p.beta)
    print(f"bifurcation at beta_bar={bb:.6f}; {len(branch)} points, "
          f"beta in [{min(p.beta for p in branch):.4f}, {max(p.beta for p in branch):.4f}]")
    return 0


def _cmd_saddle(args) -> int:
    from .fieldio import save_field
    from .saddle import (build_saddle, reflection_smoothness,
                         saddle_sign_minimum, window_sup)

    result, tile = build_saddle(args.R, args.beta, modes=(args.modes, args.modes))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_field(result.field, out / "quadrant", beta=args.beta)
    with open(out / "tile.csv", "w") as fh:
        fh.write("x,y,u\n")
        for i, x in enumerate(tile.coords):
            for j, y in enumerate(tile.coords):
                fh.write(f"{float(x)!r},{float(y)!r},{float(tile.values[i, j])!r}\n")
    rep = reflection_smoothness(result.field)
    window = args.R / 2 + 2.0
    payload = {
        "beta": args.beta,
        "R": args.R,
        "converged": result.converged,
        "sign_minimum": saddle_sign_minimum(tile),
        "window": window,
        "window_sup": window_sup(result.field, window),
        "reflection": {
            "jump_value": rep.jump_value,
            "jump_d1": rep.jump_d1,
            "jump_d2": rep.jump_d2,
            "jump_d3": rep.jump_d3,
            "navier_trace": rep.navier_trace,
            "passed": rep.passed,
        },
    }
    with open(out / "report.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"sign_min={payload['sign_minimum']:.3e} window_sup={payload['window_sup']:.6f} "
          f"reflection_ok={rep.passed}")
    return 0


def _cmd_verify(args) -> int:
    from .harness import SuiteConfig, run_suite, write_plot_data

    config = SuiteConfig(quick=args.quick, extended=args.extended, seed=args.seed)
    card = run_suite(args.suite, config)
    text = card.to_json()
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    if args.plots:
        write_plot_data(card, args.plots)
    for e in card.entries:
        status = "PASS" if e.passed else "FAIL"
        print(f"[{status}] {e.name}: {e.detail}")
    print(f"suite={card.suite} passed={card.passed}")
    return 0 if card.passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="efk",
        description=("Fourth-order Allen-Cahn solver with Navier boundary "
                     "conditions: minimize, stability, continuation, saddle, verify"))
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("minimize", help="descend the energy from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="minimize_out")
    p.set_defaults(func=_cmd_minimize)

    p = subs.add_parser("stability", help="smallest linearized eigenvalues at a solution")
    p.add_argument("--solution", required=True, help="field CSV written by this tool")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--eigvecs", action="store_true", help="also dump eigenvector fields")
    p.set_defaults(func=_cmd_stability)

    p = subs.add_parser("branch", help="pseudo-arclength continuation from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="branch_out")
    p.set_defaults(func=_cmd_branch)

    p = subs.add_parser("saddle", help="quadrant solve plus odd-reflection tile")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--modes", type=int, default=128)
    p.add_argument("--out", default="saddle_out")
    p.set_defaults(func=_cmd_saddle)

    p = subs.add_parser("verify", help="run a verification suite and emit a scorecard")
    p.add_argument("--suite", default="all")
    p.add_argument("--out", default=None, help="scorecard JSON path")
    p.add_argument("--plots", default=None, help="directory for plot-data files")
    p.add_argument("--quick", action="store_true", help="reduced grids for smoke runs")
    p.add_argument("--extended", action="store_true",
                   help="include the long-branch fold recording")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
