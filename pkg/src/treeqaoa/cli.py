"""Command-line front end: data products as CSV or JSON.

``-h`` is the local field, so help is only available as ``--help``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import angle_tables
from .graph_lab import QubitCapExceeded, fixed_angle_experiment
from .metrics import (
    approximation_ratios,
    gw_guarantee_constant,
    greedy_guarantee,
    load_bounds,
    performance_record,
)
from .optimizer import OptimizationConfig, sweep_field, warm_start_ladder
from .tree import AngleSchedule, Backend, DepthCapExceeded, TreeProblem, real_correlators
from .tree.energy import energy_from_correlators

SCHEMA_VERSION = 1
EXIT_VALIDATION = 2
EXIT_DEPTH_CAP = 3


class CliError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _add_help(p: argparse.ArgumentParser) -> None:
    p.add_argument("--help", action="help", help="show this help message and exit")


def _sub(subs, name: str, help: str) -> argparse.ArgumentParser:
    p = subs.add_parser(name, help=help, add_help=False)
    _add_help(p)
    return p


def _opt_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", default="blocks", choices=[b.value for b in Backend if b is not Backend.CLOSED_P1])


def _out_args(p: argparse.ArgumentParser, formats=("csv", "json")) -> None:
    p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--bounds", type=Path, default=None, help="override bounds table (JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treeqaoa", add_help=False, description=__doc__)
    _add_help(parser)
    parser.add_argument("-v", "--verbose", action="store_true")
    subs = parser.add_subparsers(dest="command", required=True)

    p = _sub(subs, "density", "correlators and energy density at given angles")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-h", type=float, required=True, dest="h")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--gamma", type=_floats, required=True)
    p.add_argument("--beta", type=_floats, required=True)
    p.add_argument("--backend", default="blocks", choices=[b.value for b in Backend])

    p = _sub(subs, "sweep", "optimised angles and ratios along a field grid")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--h-min", type=float, required=True)
    p.add_argument("--h-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    _opt_args(p)
    _out_args(p)

    p = _sub(subs, "frontier", "approximation ratio against depth for several d")
    p.add_argument("--d-list", type=_ints, required=True)
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--problem", choices=["maxcut", "mis"], required=True)
    _opt_args(p)
    _out_args(p)

    p = _sub(subs, "finite", "fixed tree angles on sampled finite graphs")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--instances", type=int, required=True)
    p.add_argument("--problem", choices=["maxcut", "mis"], default="maxcut")
    p.add_argument("--baseline", choices=["gw", "greedy"], default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--roundings", type=int, default=100)
    p.add_argument("--greedy-runs", type=int, default=100)
    p.add_argument("--gamma", type=_floats, default=None, help="defaults to the shipped tree angles")
    p.add_argument("--beta", type=_floats, default=None)
    _out_args(p, formats=("json",))

    p = _sub(subs, "angles", "optimise a ladder of depths and write the angle table")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-h", type=float, required=True, dest="h")
    p.add_argument("--p-max", type=int, required=True)
    _opt_args(p)
    _out_args(p, formats=("text", "json"))

    p = _sub(subs, "angles-show", "print the shipped tree-angle tables")
    p.add_argument("--problem", choices=["maxcut", "mis"], required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def run_config(args: argparse.Namespace) -> dict:
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if k != "verbose"}
    return dict(sorted(cfg.items()))


def header_lines(schema: str, args: argparse.Namespace, bounds_hash: str) -> list[str]:
    return [
        f"# schema: treeqaoa.{schema}/v{SCHEMA_VERSION}",
        f"# run_config: {json.dumps(run_config(args), sort_keys=True)}",
        f"# bounds_sha1: {bounds_hash}",
    ]


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.write_text(text)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv_text(header: list[str], columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write("\n".join(header) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _json_text(schema: str, args, bounds_hash: str, payload) -> str:
    doc = {
        "schema": f"treeqaoa.{schema}/v{SCHEMA_VERSION}",
        "run_config": run_config(args),
        "bounds_sha1": bounds_hash,
        "data": payload,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(schema, args, bounds_hash, columns, rows) -> None:
    if args.format == "json":
        _emit(_json_text(schema, args, bounds_hash, rows), args.out)
    else:
        _emit(_csv_text(header_lines(schema, args, bounds_hash), columns, rows), args.out)


def _angles(gammas, betas, p: int) -> AngleSchedule:
    if len(gammas) != p or len(betas) != p:
        raise CliError(f"need {p} gammas and {p} betas, got {len(gammas)} and {len(betas)}")
    return AngleSchedule(gammas, betas)


def _opt_config(args) -> OptimizationConfig:
    return OptimizationConfig(restarts=args.restarts, seed=args.seed, backend=args.backend)


def _angle_columns(p: int) -> list[str]:
    return [f"gamma_{i}" for i in range(1, p + 1)] + [f"beta_{i}" for i in range(1, p + 1)]


def _angle_fields(a: AngleSchedule) -> dict:
    return dict(zip(_angle_columns(a.p), a.gammas + a.betas))


def _record(problem: TreeProblem, angles: AngleSchedule, bounds) -> dict:
    zz, z = real_correlators(problem, angles)
    e = energy_from_correlators(problem, zz, z)
    rec = approximation_ratios(performance_record(problem.d, problem.h, problem.p, e, zz, z), bounds)
    out = asdict(rec)
    out["mis_meaningful"] = rec.mis_meaningful
    return out


def cmd_density(args) -> None:
    problem = TreeProblem(args.d, args.h, args.p)
    angles = _angles(args.gamma, args.beta, args.p)
    zz, z = real_correlators(problem, angles, args.backend)
    out = {
        "d": problem.d, "h": problem.h, "p": problem.p, "backend": args.backend,
        "zz": zz, "z": z, "energy_density": energy_from_correlators(problem, zz, z),
    }
    print(json.dumps(out))


def cmd_sweep(args) -> None:
    if args.steps < 2:
        raise CliError("steps must be >= 2")
    if args.h_max < args.h_min:
        raise CliError("h-max must be >= h-min")
    bounds = load_bounds(args.bounds)
    grid = np.linspace(args.h_min, args.h_max, args.steps)
    rows = []
    for h, res in sweep_field(args.d, args.p, grid, _opt_config(args)):
        rec = _record(TreeProblem(args.d, h, args.p), res.best_angles, bounds)
        rows.append({"h": float(h), **_angle_fields(res.best_angles), "energy": res.best_energy, **rec})
    cols = ["h", *_angle_columns(args.p), "energy", "c_p", "r_p", "alpha_mc", "alpha_mis"]
    _write("sweep", args, bounds.content_hash, cols, rows)


def cmd_frontier(args) -> None:
    bounds = load_bounds(args.bounds)
    a_gw = gw_guarantee_constant()
    rows = []
    for d in args.d_list:
        h = angle_tables.golden_field(args.problem, d)
        ladder = warm_start_ladder(TreeProblem(d, h, 1), args.p_max, _opt_config(args))
        b = bounds.bounds.get(d)
        for res in ladder:
            rec = _record(res.problem, res.best_angles, bounds)
            alpha = rec["alpha_mc"] if args.problem == "maxcut" else rec["alpha_mis"]
            rows.append({
                "problem": args.problem, "d": d, "p": res.problem.p, "h": h,
                "energy": res.best_energy, "c_p": rec["c_p"], "r_p": rec["r_p"], "alpha": alpha,
                "alpha_gw": a_gw,
                "random_sampling": 0.5 / b.c_ub if b else None,
                "greedy_guarantee": greedy_guarantee(d),
                "mu_star_lb": b.mu_star_lb if b else None,
                "gammas": " ".join(map(repr, res.best_angles.gammas)),
                "betas": " ".join(map(repr, res.best_angles.betas)),
            })
    cols = ["problem", "d", "p", "h", "energy", "c_p", "r_p", "alpha", "alpha_gw",
            "random_sampling", "greedy_guarantee", "mu_star_lb", "gammas", "betas"]
    _write("frontier", args, bounds.content_hash, cols, rows)


def cmd_finite(args) -> None:
    bounds = load_bounds(args.bounds)
    if args.gamma is None or args.beta is None:
        try:
            angles = angle_tables.golden_angles(args.problem, args.d, args.p)
        except KeyError as exc:
            raise CliError(f"{exc.args[0]}; pass --gamma and --beta") from None
    else:
        angles = _angles(args.gamma, args.beta, args.p)
    report = fixed_angle_experiment(
        args.d, args.p, args.n, args.instances, angles, args.seed,
        problem=args.problem, baseline=args.baseline,
        roundings=args.roundings, greedy_runs=args.greedy_runs,
    )
    _emit(_json_text("finite", args, bounds.content_hash, report), args.out)


def cmd_angles(args) -> None:
    bounds = load_bounds(args.bounds)
    ladder = warm_start_ladder(TreeProblem(args.d, args.h, 1), args.p_max, _opt_config(args))
    table = {r.problem.p: r.best_angles for r in ladder}
    if args.format == "json":
        payload = json.loads(angle_tables.table_to_json(table))
        payload["energies"] = {str(r.problem.p): r.best_energy for r in ladder}
        _emit(_json_text("angles", args, bounds.content_hash, payload), args.out)
        return
    head = header_lines("angles", args, bounds.content_hash)
    body = angle_tables.format_table(table, title=f"tree angles d={args.d} h={args.h}")
    _emit("\n".join(head) + "\n" + body, args.out)


def cmd_angles_show(args) -> None:
    table = angle_tables.golden_table(args.problem, args.d)
    if args.format == "json":
        print(angle_tables.table_to_json(table))
    else:
        sys.stdout.write(angle_tables.format_table(table, title=f"{args.problem} d={args.d}"))


COMMANDS = {
    "density": cmd_density,
    "sweep": cmd_sweep,
    "frontier": cmd_frontier,
    "finite": cmd_finite,
    "angles": cmd_angles,
    "angles-show": cmd_angles_show,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except (DepthCapExceeded, QubitCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEPTH_CAP
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
