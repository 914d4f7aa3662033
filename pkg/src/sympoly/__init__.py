"""Exact polytope computations for symmetry classes of alternating sign matrices."""
from __future__ import annotations

from .asm import SignMatrix, SymmetryClass, is_asm, is_member
from .core import assemble, core_positions, project
from .enumeration import enumerate_class, enumerate_symmetric
from .hrep import build_core, build_fullspace
from .lp import LPSolver, lp_solve

__version__ = "0.1.0"

__all__ = [
    "SignMatrix",
    "SymmetryClass",
    "is_asm",
    "is_member",
    "assemble",
    "core_positions",
    "project",
    "enumerate_class",
    "enumerate_symmetric",
    "build_core",
    "build_fullspace",
    "LPSolver",
    "lp_solve",
]
