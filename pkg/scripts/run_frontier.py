"""Approximation ratio against depth for MaxCut and MIS."""

import argparse
from pathlib import Path

from treeqaoa.cli import main

p = argparse.ArgumentParser()
p.add_argument("--d-list", default="3,4,5,6,7,8,9,10,20,50,100")
p.add_argument("--p-max", type=int, default=3)
p.add_argument("--restarts", type=int, default=None)
p.add_argument("--outdir", type=Path, default=Path("results"))
args = p.parse_args()

args.outdir.mkdir(parents=True, exist_ok=True)
for problem in ("maxcut", "mis"):
    out = args.outdir / f"frontier_{problem}_p{args.p_max}.csv"
    argv = ["frontier", "--problem", problem, "--d-list", args.d_list, "--p-max", str(args.p_max), "--out", str(out)]
    if args.restarts:
        argv += ["--restarts", str(args.restarts)]
    rc = main(argv)
    print(out, "ok" if rc == 0 else f"exit {rc}")
