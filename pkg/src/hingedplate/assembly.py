"""Assembly of the energy (stiffness) form and the weighted mass form.

The energy inner product couples Delta u Delta v with the mixed-derivative
correction weighted by (1 - sigma).  For the tensor basis the x-integrals
are exact sine/cosine orthogonality relations, so the stiffness matrix is
block diagonal over the sine mode; only the y-integrals use quadrature,
and those are exact too because the y-factors are polynomials.  The
weighted mass matrix always goes through the tensor grid since the density
is node-sampled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .basis import SpectralBasis, _legendre_tables
from .grid import QuadratureGrid, GridField


class AssemblyError(RuntimeError):
    """Assembled matrix violates its contract (non-finite or not SPD)."""


def stiffness_blocks(basis: SpectralBasis, grid: QuadratureGrid, sigma: float):
    """Per-sine-mode blocks of the energy matrix.

    For u = sin(m x) f(y), v = sin(m x) g(y) the energy form reduces, after
    integrating the trig factors exactly over (0, pi), to

        (pi/2) * int [ f'' g'' + m^4 f g - sigma m^2 (f'' g + f g'')
                       + 2 (1 - sigma) m^2 f' g' ] dy.
    """
    if not 0.0 <= sigma < 1.0:
        raise ValueError(f"sigma must lie in [0, 1), got {sigma}")
    V0, V1, V2 = _legendre_tables(grid.nodes_y, basis.n_basis_y, basis.ell, max_deriv=2)
    wy = grid.weights_y[:, None]
    bend = (V2 * wy).T @ V2
    mass = (V0 * wy).T @ V0
    cross = (V2 * wy).T @ V0
    shear = (V1 * wy).T @ V1
    blocks = []
    for m in basis.modes_x:
        m2 = float(m) ** 2
        blk = bend + m2 * m2 * mass - sigma * m2 * (cross + cross.T) \
            + 2.0 * (1.0 - sigma) * m2 * shear
        blk = 0.5 * np.pi * 0.5 * (blk + blk.T)
        if not np.all(np.isfinite(blk)):
            raise AssemblyError(f"non-finite stiffness entries in mode m={m}")
        blocks.append(blk)
    return blocks


def assemble_stiffness(basis: SpectralBasis, grid: QuadratureGrid, sigma: float) -> np.ndarray:
    """Full symmetric positive definite energy matrix (dense, block diagonal)."""
    J = basis.n_basis_y
    K = np.zeros((basis.dimension, basis.dimension))
    for i, blk in enumerate(stiffness_blocks(basis, grid, sigma)):
        K[i * J:(i + 1) * J, i * J:(i + 1) * J] = blk
    return K


def assemble_weighted_mass(basis: SpectralBasis, grid: QuadratureGrid,
                           p: GridField, *, bounds=None) -> np.ndarray:
    """Mass matrix of the weighted L2 form, entry (a,b) = sum_nodes w p phi_a phi_b.

    When `bounds = (alpha, beta)` is given, node values outside
    [alpha - 1e-12, beta + 1e-12] are rejected.
    """
    vals = p.values
    if bounds is not None:
        alpha, beta = bounds
        if vals.min() < alpha - 1e-12 or vals.max() > beta + 1e-12:
            raise AssemblyError(
                f"density values [{vals.min():.6g}, {vals.max():.6g}] leave "
                f"the admissible range [{alpha}, {beta}]"
            )
    elif vals.min() <= 0.0:
        raise AssemblyError("density must be strictly positive at every node")
    phi = basis.grid_matrix(grid)
    wp = grid.flat_weights() * vals.ravel()
    M = (phi * wp) @ phi.T
    if not np.all(np.isfinite(M)):
        raise AssemblyError("non-finite mass matrix entries")
    return 0.5 * (M + M.T)


@dataclass(frozen=True)
class StiffnessFactor:
    """Blockwise Cholesky factorization of the energy matrix.

    The exact block diagonality over the sine mode keeps each factor small
    and well scaled, which is what lets solves reach ~1e-14 relative
    residuals where a monolithic dense factorization of the full matrix
    would lose several digits.
    """

    basis: SpectralBasis
    factors: tuple

    @classmethod
    def build(cls, basis: SpectralBasis, grid: QuadratureGrid, sigma: float) -> "StiffnessFactor":
        blocks = stiffness_blocks(basis, grid, sigma)
        try:
            factors = tuple(cho_factor(blk) for blk in blocks)
        except np.linalg.LinAlgError as exc:
            raise AssemblyError(f"energy matrix is not positive definite: {exc}") from exc
        return cls(basis=basis, factors=factors)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve K x = rhs for one vector or a (dimension, k) block of vectors."""
        rhs = np.asarray(rhs, dtype=float)
        out = np.empty_like(rhs)
        J = self.basis.n_basis_y
        for i, fac in enumerate(self.factors):
            out[i * J:(i + 1) * J] = cho_solve(fac, rhs[i * J:(i + 1) * J])
        return out


def export_matrix_text(matrix: np.ndarray, path) -> None:
    """Write a dense matrix row-major, one whitespace-separated row per line."""
    mat = np.asarray(matrix, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        for row in mat:
            fh.write(" ".join(repr(float(v)) for v in row))
            fh.write("\n")


def import_matrix_text(path) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split()])
    return np.asarray(rows, dtype=float)
