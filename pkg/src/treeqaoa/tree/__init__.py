"""Depth-p QAOA correlators on regular trees."""

from .blocks import SymmetryBlock, block_sizes, contract_blocks, symmetry_label
from .closed_form import p1_closed_form
from .core import (
    AngleSchedule,
    DepthCapExceeded,
    ImaginaryPartError,
    TreeProblem,
    f_weight,
    f_weights,
    mixer_element,
    tree_sizes,
)
from .energy import Backend, correlators, energy_density, energy_from_correlators, real_correlators
from .grown import contract_grown
from .naive import contract_naive

__all__ = [
    "AngleSchedule",
    "Backend",
    "DepthCapExceeded",
    "ImaginaryPartError",
    "SymmetryBlock",
    "TreeProblem",
    "block_sizes",
    "contract_blocks",
    "contract_grown",
    "contract_naive",
    "correlators",
    "energy_density",
    "energy_from_correlators",
    "f_weight",
    "f_weights",
    "mixer_element",
    "p1_closed_form",
    "real_correlators",
    "symmetry_label",
    "tree_sizes",
]
