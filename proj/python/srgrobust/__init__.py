"""Scaled relative graph and Davis-Wielandt shell robustness analysis."""

from ._core import *  # noqa: F401,F403
from ._core import InputError, SolverError, Region, StateSpace, ThetaProfile  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
