"""Command-line entry point: ``gsod {solve,validate,export,sweep}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ConfigError, RunConfig, load_solution, parameter_hash, solution_record, write_solution
from .errors import GridTooCoarse, MapDegenerate, NegativeRadicand, NewtonDiverged, ShapeDiverged
from .euler import assemble, write_vtk
from .harness import FAST_EPS, THOROUGH_EPS, check_eps_list, run_all, scorecard
from .shape import solve_shape

log = logging.getLogger("gsod")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SCORECARD = 2
EXIT_DIVERGED = 3
EXIT_ASSEMBLY = 4

_DIVERGENCE = (NewtonDiverged, ShapeDiverged, MapDegenerate)
_ASSEMBLY = (NegativeRadicand, GridTooCoarse)


def _floats(text):
    if text is None:
        return None
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse number list {text!r}") from exc


def _setup_logging():
    level = os.environ.get("GSOD_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _config(args, eps_as_list=False):
    eps = _floats(args.eps)
    R = _floats(args.R)
    overrides = {"out": args.out, "seed": args.seed, "threads": args.threads}
    if eps is not None:
        if eps_as_list:
            overrides["eps_list"] = eps
        elif len(eps) != 1:
            raise ConfigError("solve takes a single --eps value")
        else:
            overrides["eps"] = eps[0]
    if R is not None:
        overrides["R"] = R[0]
        if len(R) > 1:
            overrides["R_list"] = R
    if getattr(args, "vtk", False):
        overrides["vtk"] = True
    return RunConfig.load(args.config, **overrides)


def _constants_table(consts, c_phys, profile):
    rows = [("family", profile.family), ("R", consts.R), ("eps", consts.eps),
            ("A0", consts.A0), ("A1", consts.A1), ("kappa", consts.kappa),
            ("F_R", consts.FR), ("c", c_phys)]
    return "\n".join(f"{k:<7} {v if isinstance(v, str) else repr(v)}" for k, v in rows)


def _write_fields(config, bundle, field, out, stem="fields"):
    field.to_csv(out / f"{stem}.csv")
    if config.vtk:
        write_vtk(bundle, field, out / f"{stem}.vtk", config.vtk_n)


def _solve_one(config, R, eps):
    profile = config.profile_functions()
    consts = config.constants(eps=eps, R=R)
    state = solve_shape(consts, profile, config.basis(), tol=config.tol_shape,
                        eps_max=config.eps_max, tol_newton=config.tol_newton,
                        verbose=log.isEnabledFor(logging.DEBUG))
    return profile, consts, state


# -- commands ---------------------------------------------------------------------
def cmd_solve(args):
    config = _config(args)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    profile, consts, state = _solve_one(config, config.R, config.eps)
    path = out / "solution.json"
    write_solution(path, solution_record(config, consts, state))
    # fields come from the written file, so solve and export agree byte for byte
    _, consts, profile, loaded = load_solution(path)
    bundle, field = assemble(loaded, consts, profile, config.grid_spec())
    _write_fields(config, bundle, field, out)
    print(_constants_table(consts, bundle.c_phys, profile))
    print(f"converged in {state.iter} iterations, |G| = {state.residual_norm:.3e}")
    return EXIT_OK


def cmd_validate(args):
    config = _config(args, eps_as_list=True)
    eps = list(THOROUGH_EPS) if args.thorough else config.eps_list or list(FAST_EPS)
    if args.eps is not None:
        eps = config.eps_list
    check_eps_list(eps)
    reports = run_all("cfg", eps, basis=config.basis(), profile=config.profile_functions(),
                      R=config.R)
    card = scorecard(reports)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "scorecard.json").write_text(card.to_json() + "\n")
    print(card.table())
    return card.exit_code


def cmd_export(args):
    config = _config(args)
    try:
        sol_config, consts, profile, state = load_solution(args.solution)
    except FileNotFoundError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    bundle, field = assemble(state, consts, profile, config.grid_spec())
    _write_fields(config, bundle, field, out)
    print(f"wrote {out / 'fields.csv'}")
    return EXIT_OK


def cmd_sweep(args):
    config = _config(args, eps_as_list=True)
    Rs = config.R_list or [config.R]
    jobs = [(R, e) for R in Rs for e in config.eps_list]
    if not jobs:
        raise ConfigError("sweep needs at least one eps value")
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)

    def work(job):
        R, e = job
        profile, consts, state = _solve_one(config, R, e)
        name = parameter_hash(config.profile, R, e, config.n_theta, config.n_rho)
        write_solution(out / f"solution-{name}.json", solution_record(config, consts, state))
        return {"R": R, "eps": e, "file": f"solution-{name}.json",
                "c": consts.eps**2 * state.c_eps_B, "iterations": state.iter}

    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        rows = list(pool.map(work, jobs))
    (out / "sweep.json").write_text(json.dumps(rows, indent=2) + "\n")
    for row in rows:
        print(f"R={row['R']!r} eps={row['eps']!r} c={row['c']!r} -> {row['file']}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gsod", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH", help="JSON run configuration")
        p.add_argument("--eps", help="epsilon (comma-separated list for validate/sweep)")
        p.add_argument("--R", help="major radius (comma-separated list for sweep)")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--threads", type=int, help="worker threads for sweep")
        p.add_argument("--seed", type=int, help="random seed")
        p.add_argument("--thorough", action="store_true", help="use the long epsilon list")
        p.add_argument("--vtk", action="store_true", help="also write a legacy VTK file")

    p = sub.add_parser("solve", help="solve the free-boundary problem and write fields")
    common(p)
    p.set_defaults(func=cmd_solve)
    p = sub.add_parser("validate", help="run the convergence-order scorecard")
    common(p)
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("export", help="re-assemble fields from a solution file")
    common(p)
    p.add_argument("solution", help="solution JSON written by solve or sweep")
    p.set_defaults(func=cmd_export)
    p = sub.add_parser("sweep", help="solve over lists of eps and R")
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _DIVERGENCE as exc:
        print(f"solver diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except _ASSEMBLY as exc:
        print(f"assembly failed: {exc}", file=sys.stderr)
        return EXIT_ASSEMBLY


if __name__ == "__main__":
    sys.exit(main())
