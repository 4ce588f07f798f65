"""Asymptotic QAOA on regular trees for MaxCut and MIS."""

from .tree import AngleSchedule, Backend, TreeProblem, correlators, energy_density

__version__ = "0.1.0"

__all__ = ["AngleSchedule", "Backend", "TreeProblem", "correlators", "energy_density"]
