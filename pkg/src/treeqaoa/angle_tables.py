"""Tree-angle tables: shipped golden values and a plain-text record format.

Stored angles use the ansatz convention. The printed tables show the
mixing angles with the opposite sign, so text I/O flips beta.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources

from .tree.core import AngleSchedule

SIGN_NOTE = "# beta printed with flipped sign (printed beta = -beta of the ansatz)"

_RECORD = re.compile(r"^\s*(\d+)\s+gamma=\(([^)]*)\)\s+beta=\(([^)]*)\)\s*$")


@lru_cache(maxsize=1)
def _golden() -> dict:
    text = resources.files("treeqaoa.data").joinpath("tree_angles.json").read_text()
    return json.loads(text)


def golden_problems() -> dict[str, list[int]]:
    return {prob: sorted(int(d) for d in t) for prob, t in _golden()["tables"].items()}


def golden_table(problem: str, d: int) -> dict[int, AngleSchedule]:
    try:
        rows = _golden()["tables"][problem][str(d)]
    except KeyError:
        raise KeyError(f"no shipped angles for {problem} d={d}") from None
    return {int(p): AngleSchedule(r["gammas"], r["betas"]) for p, r in sorted(rows.items(), key=lambda kv: int(kv[0]))}


def golden_angles(problem: str, d: int, p: int) -> AngleSchedule:
    table = golden_table(problem, d)
    if p not in table:
        raise KeyError(f"no shipped angles for {problem} d={d} p={p}")
    return table[p]


def golden_field(problem: str, d: int) -> float:
    """Field the tables were optimised for: 0 for MaxCut, d-2 for MIS."""
    if problem == "maxcut":
        return 0.0
    if problem == "mis":
        return float(d - 2)
    raise ValueError(f"unknown problem {problem!r}")


def _fmt(xs, digits: int) -> str:
    return ", ".join(f"{x:.{digits}f}" for x in xs)


def format_record(angles: AngleSchedule, digits: int = 4) -> str:
    printed = [-b + 0.0 for b in angles.betas]
    return f"{angles.p} gamma=({_fmt(angles.gammas, digits)}) beta=({_fmt(printed, digits)})"


def format_table(table: dict[int, AngleSchedule], title: str = "", digits: int = 4) -> str:
    lines = [f"# {title}"] if title else []
    lines.append(SIGN_NOTE)
    lines += [format_record(table[p], digits) for p in sorted(table)]
    return "\n".join(lines) + "\n"


def parse_record(line: str) -> AngleSchedule:
    m = _RECORD.match(line)
    if not m:
        raise ValueError(f"not an angle record: {line!r}")
    p = int(m.group(1))
    gammas = [float(x) for x in m.group(2).split(",")]
    betas = [-float(x) for x in m.group(3).split(",")]
    if len(gammas) != p or len(betas) != p:
        raise ValueError(f"record declares p={p} but lists {len(gammas)}/{len(betas)} angles")
    return AngleSchedule(gammas, betas)


def parse_table(text: str) -> dict[int, AngleSchedule]:
    out = {}
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        a = parse_record(line)
        out[a.p] = a
    return out


def table_to_json(table: dict[int, AngleSchedule]) -> str:
    rows = {str(p): {"gammas": list(a.gammas), "betas": list(a.betas)} for p, a in sorted(table.items())}
    return json.dumps({"beta_convention": "ansatz", "angles": rows}, indent=2)


def table_from_json(text: str) -> dict[int, AngleSchedule]:
    raw = json.loads(text)
    return {int(p): AngleSchedule(r["gammas"], r["betas"]) for p, r in raw["angles"].items()}
