"""Uniform finite-difference meshes on intervals and rectangles,
the discrete Dirichlet Laplacian, quadrature and norms."""
from __future__ import annotations

import dataclasses
import logging
import math
import pathlib

import numpy as np
import numpy.typing as npt
import pandas as pd
import scipy.sparse
import scipy.sparse.linalg

from . import constants
from .errors import SolverError


logger = logging.getLogger(__name__)


Field = npt.NDArray[np.float64]


@dataclasses.dataclass(frozen=True)
class DomainSpec:
    """Specification of a box domain (0, L_1) x ... x (0, L_d).

    Attributes
    ----------
    dimension : int
        1 or 2.
    lengths : tuple of float
        Extent of the domain along each axis.
    cells : tuple of int
        Number of cells along each axis, at least 4.
    """
    dimension: int
    lengths: tuple[float, ...]
    cells: tuple[int, ...]

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(
                f"dimension must be 1 or 2, got: {self.dimension}"
            )
        if len(self.lengths) != self.dimension or len(self.cells) != self.dimension:
            raise ValueError(
                f"Expected {self.dimension} lengths and {self.dimension} cell counts, "
                f"got lengths={self.lengths}, cells={self.cells}"
            )
        for length in self.lengths:
            if not (length > 0 and math.isfinite(length)):
                raise ValueError(
                    f"Domain lengths must be positive and finite, got: {self.lengths}"
                )
        for n_cells in self.cells:
            if int(n_cells) != n_cells or n_cells < constants.MIN_CELLS:
                raise ValueError(
                    f"Each axis needs an integer number of cells >= {constants.MIN_CELLS}, "
                    f"got: {self.cells}"
                )


@dataclasses.dataclass(frozen=True, eq=False)
class Mesh:
    """Interior nodes of a uniform tensor grid.

    Attributes
    ----------
    spec : DomainSpec
    h : tuple of float
        Spacing along each axis.
    shape : tuple of int
        Number of interior nodes along each axis.
    coords : numpy.ndarray
        Coordinates of interior nodes, shape (n, dimension),
        lexicographic with the first axis varying slowest.
    cell_volume : float
        Quadrature weight of one node.
    volume : float
        |Omega|, product of the extents.
    matrix : scipy.sparse.csr_matrix
        Matrix of -Delta_h with homogeneous Dirichlet boundary values.
    """
    spec: DomainSpec
    h: tuple[float, ...]
    shape: tuple[int, ...]
    coords: np.ndarray
    cell_volume: float
    volume: float
    matrix: scipy.sparse.csr_matrix

    @property
    def n(self) -> int:
        return int(np.prod(self.shape))

    @property
    def dimension(self) -> int:
        return self.spec.dimension


def _second_difference(n_interior: int, h: float) -> scipy.sparse.csr_matrix:
    """1-D stencil (-1, 2, -1) / h**2 on the interior nodes."""
    main = np.full(n_interior, 2.0)
    off = np.full(n_interior - 1, -1.0)
    return scipy.sparse.diags([off, main, off], [-1, 0, 1], format="csr") / h**2


def build_mesh(spec: DomainSpec) -> Mesh:
    """Build the uniform mesh described by ``spec``."""
    h = tuple(length / n_cells for length, n_cells in zip(spec.lengths, spec.cells))
    shape = tuple(n_cells - 1 for n_cells in spec.cells)
    axes = [
        step * np.arange(1, n_nodes + 1) for step, n_nodes in zip(h, shape)
    ]
    grids = np.meshgrid(*axes, indexing="ij")
    coords = np.column_stack([grid.ravel() for grid in grids])

    if spec.dimension == 1:
        matrix = _second_difference(shape[0], h[0])
    else:
        lx = _second_difference(shape[0], h[0])
        ly = _second_difference(shape[1], h[1])
        matrix = (
            scipy.sparse.kron(lx, scipy.sparse.identity(shape[1]))
            + scipy.sparse.kron(scipy.sparse.identity(shape[0]), ly)
        )
    matrix = scipy.sparse.csr_matrix(matrix)

    mesh = Mesh(
        spec=spec,
        h=h,
        shape=shape,
        coords=coords,
        cell_volume=float(np.prod(h)),
        volume=float(np.prod(spec.lengths)),
        matrix=matrix,
    )
    logger.info(
        f"Built {spec.dimension}-D mesh with cells {spec.cells}, {mesh.n} interior nodes, h={h}"
    )
    return mesh


def _check_field(mesh: Mesh, u: Field) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (mesh.n,):
        raise ValueError(
            f"Field has shape {u.shape} but mesh has {mesh.n} interior nodes"
        )
    return u


def neg_laplacian(mesh: Mesh, u: Field) -> Field:
    """Apply -Delta_h to ``u`` (zero boundary values)."""
    u = _check_field(mesh, u)
    return mesh.matrix @ u


def integrate_power(mesh: Mesh, u: Field, q: float) -> float:
    """Nodal quadrature of u**q: sum of u_i**q times the cell volume."""
    u = _check_field(mesh, u)
    if float(q) != int(q) and np.any(u < 0):
        raise ValueError(
            f"Cannot integrate a field with negative values to the non-integer power q={q}"
        )
    return float(np.sum(u**q) * mesh.cell_volume)


def grad_norm_sq(mesh: Mesh, u: Field) -> float:
    """Discrete Dirichlet energy u^T (-Delta_h u) * omega."""
    u = _check_field(mesh, u)
    return float(u @ (mesh.matrix @ u) * mesh.cell_volume)


def sup_norm(u: Field) -> float:
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        return 0.0
    return float(np.max(np.abs(u)))


def lp_norm(mesh: Mesh, u: Field, r: float) -> float:
    if r <= 0:
        raise ValueError(f"r must be positive, got: {r}")
    return integrate_power(mesh, np.abs(_check_field(mesh, u)), r) ** (1.0 / r)


def solve_dirichlet(
    mesh: Mesh,
    rhs: Field,
    rtol: float = constants.CG_RTOL,
    maxiter: int | None = None,
    x0: Field | None = None,
) -> Field:
    """Solve -Delta_h w = rhs with conjugate gradients."""
    rhs = _check_field(mesh, rhs)
    return cg_solve(mesh.matrix, rhs, rtol=rtol, maxiter=maxiter, x0=x0)


def cg_solve(
    matrix,
    rhs: np.ndarray,
    rtol: float = constants.CG_RTOL,
    maxiter: int | None = None,
    x0: np.ndarray | None = None,
) -> np.ndarray:
    """Conjugate gradients for a symmetric positive definite ``matrix``.

    Raises SolverError if the iteration cap is reached.
    """
    if maxiter is None:
        maxiter = constants.CG_MAXITER_FACTOR * rhs.shape[0]
    solution, info = scipy.sparse.linalg.cg(
        matrix, rhs, x0=x0, rtol=rtol, atol=0.0, maxiter=maxiter
    )
    if info > 0:
        raise SolverError(
            f"CG did not reach rtol={rtol} within {maxiter} iterations"
        )
    if info < 0:
        raise SolverError(f"CG failed with illegal input (info={info})")
    return solution


def field_frame(mesh: Mesh, u: Field) -> pd.DataFrame:
    """One row per interior node: coordinate columns then ``value``."""
    u = _check_field(mesh, u)
    columns = ("x", "y")[:mesh.dimension]
    records = {name: mesh.coords[:, axis] for axis, name in enumerate(columns)}
    records["value"] = u
    return pd.DataFrame(records)


def write_field_csv(mesh: Mesh, u: Field, csv_path: str | pathlib.Path) -> None:
    field_frame(mesh, u).to_csv(csv_path, index=False)
