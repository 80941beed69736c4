"""Tenfold-way classification of gapped Bloch Hamiltonians.

Submodules: ``model`` (Bloch models, grids, flattening), ``symmetry`` (AZ
classification), ``bott`` (periodic table), ``clifford`` (complex structures
and geodesics), ``invariants``, ``suspension`` (interpolations and pumps),
``models`` (built-in Hamiltonians) and ``cli``.
"""
from .bott import InvariantGroup, TableIndex, generate_table, group_at, pi0
from .model import BlochModel, FlattenedSample, KGrid, flatten, min_gap
from .symmetry import AZClass, SymmetrySpec, classify

__version__ = "0.1.0"
