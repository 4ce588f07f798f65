"""Energy and ratios of optimised p=1 QAOA as a function of the field.

Writes one CSV per regularity into ``results/``.
"""

import argparse
from pathlib import Path

from treeqaoa.cli import main

p = argparse.ArgumentParser()
p.add_argument("--d-list", default="3,4,5,6,10")
p.add_argument("-p", type=int, default=1)
p.add_argument("--steps", type=int, default=50)
p.add_argument("--restarts", type=int, default=16)
p.add_argument("--outdir", type=Path, default=Path("results"))
args = p.parse_args()

args.outdir.mkdir(parents=True, exist_ok=True)
for d in map(int, args.d_list.split(",")):
    out = args.outdir / f"sweep_d{d}_p{args.p}.csv"
    rc = main([
        "sweep", "-d", str(d), "-p", str(args.p),
        "--h-min", "0", "--h-max", str(1.5 * d), "--steps", str(args.steps),
        "--restarts", str(args.restarts), "--out", str(out),
    ])
    print(out, "ok" if rc == 0 else f"exit {rc}")
