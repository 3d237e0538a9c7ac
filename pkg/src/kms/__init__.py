"""Ordered positive solutions of a nonlocal elliptic problem with a degenerate coefficient"""
__version__ = "0.1"

from . import (
    config,
    constants,
    discretization,
    fixed_point_engine,
    local_solver,
    model,
    spectral,
)
